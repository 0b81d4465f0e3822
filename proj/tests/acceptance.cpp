// Acceptance gate: one pass/fail line per criterion, exit 1 on any failure.
// Every tolerance used below is pinned here as a named constant.

#include "traceform/bounds.hpp"
#include "traceform/cyclotomic.hpp"
#include "traceform/deep_hole.hpp"
#include "traceform/field_params.hpp"
#include "traceform/lattice.hpp"
#include "traceform/period_basis.hpp"
#include "traceform/report.hpp"
#include "traceform/residue_orbits.hpp"
#include "traceform/scan.hpp"
#include "traceform/sieve.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace traceform;

namespace {

// --- pinned tolerances and budgets ------------------------------------------
constexpr long kPhiCap = 120;                 // field sweep: phi(p^r) <= 120
constexpr std::size_t kSweepSize = 34;        // number of fields in that sweep
constexpr std::uint64_t kScanEMax = 200;      // survey horizon for even e
constexpr std::size_t kScanRows = 5480;       // expected verdicts for e <= 200
constexpr std::size_t kScanDegreeRows = 266;  // ... settled by degree <= 8
constexpr std::size_t kScanHRows = 5214;      // ... settled by h <= 1
constexpr double kFloatVerdictMargin = 1e-6;  // |h - 1| must clear this
constexpr std::size_t kDeepHoleTrials = 10000;
constexpr std::uint64_t kDeepHoleSeed = 0;
constexpr double kDeepHoleShortfall = 1e-6;   // allowed undershoot of the exact value
constexpr double kDeepHoleOvershoot = 1e-9;   // allowed numeric overshoot

#define CHECK(cond, msg)                                   \
  do {                                                     \
    if (!(cond)) {                                         \
      ok = false;                                          \
      std::ostringstream os_;                              \
      os_ << msg;                                          \
      std::cout << "       detail: " << os_.str() << "\n"; \
    }                                                      \
  } while (0)

std::string param_tag(const FieldParams& fp) {
  return "(p=" + dec_string(fp.p) + ", r=" + std::to_string(fp.r) +
         ", e=" + dec_string(fp.e) + ")";
}

// --- shared field sweep -------------------------------------------------------
// Every (p, r, e) with p in {3,5,7,11,13}, e | p-1, degree n >= 2 and
// phi(p^r) <= kPhiCap. The cyclotomic oracle is computed once and reused.
struct FieldCase {
  FieldParams fp;
  OrbitSpace space;
  PeriodBasis basis;
  GramMatrix closed;
  GramMatrix oracle;
};

std::vector<FieldCase>& field_cases() {
  static std::vector<FieldCase> cases = [] {
    std::vector<FieldCase> out;
    for (long p : {3L, 5L, 7L, 11L, 13L}) {
      for (unsigned r = 1;; ++r) {
        Int phi = phi_prime_power(Int(p), r);
        if (phi > kPhiCap) break;
        for (const Int& e : divisors_ascending(Int(p - 1))) {
          FieldParams fp = make_field_params(Int(p), r, e);
          if (fp.n < 2) continue;
          OrbitSpace space(fp);
          PeriodBasis basis = build_basis(space);
          GramMatrix closed = gram_closed_form(space, basis);
          CyclotomicRing ring(fp);
          GramMatrix oracle = ring.gram_oracle(space, basis);
          out.push_back({std::move(fp), std::move(space), std::move(basis),
                         std::move(closed), std::move(oracle)});
        }
      }
    }
    return out;
  }();
  return cases;
}

// large-degree parameters exercised through the exact bound chain only
std::vector<FieldParams> large_degree_params() {
  return {make_field_params(3, 5, 1),  make_field_params(3, 6, 1),
          make_field_params(5, 4, 1),  make_field_params(7, 3, 1),
          make_field_params(11, 2, 1), make_field_params(13, 2, 1)};
}

// --- criteria -----------------------------------------------------------------

bool criterion_gram_oracle() {
  bool ok = true;
  const auto& cases = field_cases();
  CHECK(cases.size() == kSweepSize,
        "expected " << kSweepSize << " fields, enumerated " << cases.size());
  for (const FieldCase& c : cases) {
    CHECK(verify_basis_conditions(c.space, c.basis.a_orbits).ok(),
          param_tag(c.fp) << ": basis conditions failed");
    CHECK(c.closed == c.oracle,
          param_tag(c.fp) << ": closed-form Gram differs from the oracle");
  }
  return ok;
}

bool criterion_decomposition() {
  bool ok = true;
  for (const FieldCase& c : field_cases()) {
    DecompositionVerdict v =
        verify_decomposition(c.oracle, c.space, c.basis, expected_blocks(c.fp));
    CHECK(v.ok, param_tag(c.fp) << ": " << v.what << " at (" << v.row << ", "
                                << v.col << ")");
    const Rat det = det_exact(c.oracle);
    const Rat expected = Rat(pow_int(c.fp.p, to_ulong(upsilon(c.fp), "upsilon")));
    CHECK(det == expected, param_tag(c.fp) << ": det " << rat_cell(det)
                                           << " != p^upsilon");
  }
  return ok;
}

bool criterion_bound_identities() {
  bool ok = true;
  std::vector<FieldParams> params;
  for (const FieldCase& c : field_cases()) params.push_back(c.fp);
  for (const FieldParams& fp : large_degree_params()) params.push_back(fp);
  for (const FieldParams& fp : params) {
    BoundsReport rep = compute_report(fp);
    const unsigned long ups = to_ulong(rep.upsilon_value, "upsilon");
    CHECK(rep.minima_bound_sq == rep.omega_sq_2n * Rat(pow_int(fp.p, ups)),
          param_tag(fp) << ": minima bound != omega^{2n} p^upsilon");
    CHECK(rep.minkowski_cert ==
              rep.omega_sq_2n * Rat(pow_int(Int(4), to_ulong(fp.n, "n"))),
          param_tag(fp) << ": certificate != 4^n omega^{2n}");
    CHECK(Rat(fp.n) * rep.delta == Rat(rep.delta_n),
          param_tag(fp) << ": n delta != delta_n");
    CHECK(rep.upsilon_value == Int(fp.r) * fp.n - rep.delta_n - 1,
          param_tag(fp) << ": upsilon != r n - n delta - 1");
    if (fp.r == 1)
      CHECK(rep.epsilon == make_rat(fp.n, fp.n - 1),
            param_tag(fp) << ": epsilon != n/(n-1) at r = 1");
    CHECK(rep.epsilon > 1 && rep.epsilon <= 2,
          param_tag(fp) << ": epsilon outside (1, 2]");
    CHECK((rep.epsilon == 2) == (fp.r == 1 && fp.n == 2),
          param_tag(fp) << ": epsilon = 2 characterization failed");
  }
  return ok;
}

bool criterion_omega_cube() {
  bool ok = true;
  std::size_t checked = 0;
  for (const FieldCase& c : field_cases()) {
    if (c.fp.r < 2) continue;
    CHECK(omega_cube_bound_ok(c.fp),
          param_tag(c.fp) << ": omega cube bound failed at r >= 2");
    ++checked;
  }
  CHECK(checked == 20, "expected 20 fields with r >= 2, saw " << checked);
  // non-vacuity: a prime-conductor field may fail the same inequality
  CHECK(!omega_cube_bound_ok(make_field_params(13, 1, 6)),
        "(p=13, r=1, e=6) unexpectedly satisfies the cube bound");
  return ok;
}

bool criterion_imaginary_quadratic() {
  bool ok = true;
  const std::vector<long> ps = {3, 7, 11, 19, 23, 31, 43, 47, 59, 67, 71, 79, 83};
  for (long p : ps) {
    // throws internally if the generic bound chain disagrees with the square
    Rat exact = exact_min_imag_quad(Int(p));
    CHECK(exact == make_rat((p + 1) * (p + 1), 16 * p),
          "p=" << p << ": exact minimum has the wrong value");
    CHECK((exact < 1) == (p < 14),
          "p=" << p << ": norm-Euclidean classification flipped");
  }
  CHECK(exact_min_imag_quad(3) == make_rat(1, 3), "p=3 classic value");
  CHECK(exact_min_imag_quad(7) == make_rat(4, 7), "p=7 classic value");
  CHECK(exact_min_imag_quad(11) == make_rat(9, 11), "p=11 classic value");
  CHECK(exact_min_imag_quad(23) == make_rat(36, 23), "p=23 classic value");
  return ok;
}

bool criterion_survey() {
  bool ok = true;
  ScanSummary s = scan_range(kScanEMax);
  CHECK(s.rows.size() == kScanRows,
        "expected " << kScanRows << " rows, got " << s.rows.size());
  CHECK(s.unresolved == 0, s.unresolved << " unresolved pairs");
  std::size_t deg = 0, byh = 0;
  for (const ScanVerdict& row : s.rows) {
    switch (row.outcome) {
      case ScanOutcome::degree_le_8: ++deg; break;
      case ScanOutcome::minkowski_by_h: ++byh; break;
      default:
        CHECK(false, "e=" << row.e << " p=" << row.p << ": unexpected outcome "
                          << to_string(row.outcome));
    }
    if (row.h) {
      CHECK(std::abs(row.h->h_value - 1.0) > kFloatVerdictMargin,
            "e=" << row.e << " p=" << row.p << ": h display too close to 1");
      CHECK((row.h->h_value < 1.0) == row.h->leq_one,
            "e=" << row.e << " p=" << row.p << ": display contradicts verdict");
    }
  }
  CHECK(deg == kScanDegreeRows, "degree rows: " << deg);
  CHECK(byh == kScanHRows, "h rows: " << byh);

  // recertify every h verdict with the exact integers a^{p-1} p^e <= b^{p-1}
  for (const ScanVerdict& row : s.rows) {
    if (row.outcome != ScanOutcome::minkowski_by_h) continue;
    HCert exact = h_leq_one(row.e, row.p, true);
    CHECK(exact.method == CertMethod::exact_rational &&
              exact.cert_num.has_value() && exact.cert_den.has_value(),
          "e=" << row.e << " p=" << row.p << ": exact stage did not run");
    CHECK(exact.leq_one && *exact.cert_num <= *exact.cert_den,
          "e=" << row.e << " p=" << row.p << ": exact recertification failed");
  }
  return ok;
}

bool criterion_deep_holes() {
  bool ok = true;
  const double a2 = deep_hole_lower_bound(gram_Lbm(Rat(3), 2), kDeepHoleTrials,
                                          kDeepHoleSeed);
  const double a2_exact = 2.0 / 3.0;  // (p^2 - 1)/12 at p = 3
  CHECK(a2 >= a2_exact - kDeepHoleShortfall, "L_{3,2}: found only " << a2);
  CHECK(a2 <= a2_exact + kDeepHoleOvershoot, "L_{3,2}: overshoot " << a2);

  const double l54 = deep_hole_lower_bound(gram_Lbm(Rat(5), 4), kDeepHoleTrials,
                                           kDeepHoleSeed);
  const double l54_exact = 2.0;  // (p^2 - 1)/12 at p = 5
  CHECK(l54 >= l54_exact - kDeepHoleShortfall, "L_{5,4}: found only " << l54);
  CHECK(l54 <= l54_exact + kDeepHoleOvershoot, "L_{5,4}: overshoot " << l54);
  return ok;
}

bool criterion_epsilon() {
  bool ok = true;
  std::vector<FieldParams> sweep;
  for (std::uint64_t p : sieve_primes(97)) {
    if (p == 2) continue;
    for (const Int& e : divisors_ascending(Int(p) - 1)) {
      FieldParams fp = make_field_params(Int(p), 1, e);
      if (fp.n >= 2) sweep.push_back(fp);
    }
  }
  const std::size_t r1_rows = sweep.size();
  for (const FieldCase& c : field_cases())
    if (c.fp.r >= 2) sweep.push_back(c.fp);
  for (const FieldParams& fp : large_degree_params()) sweep.push_back(fp);

  std::vector<EpsilonRow> rows = epsilon_asymptotics_check(sweep);  // throws on failure
  CHECK(rows.size() == sweep.size(), "row count mismatch");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].params.r == 1) {
      CHECK(rows[i].margin == 0, param_tag(rows[i].params) << ": r = 1 margin");
    } else {
      CHECK(rows[i].margin > 0,
            param_tag(rows[i].params) << ": asymptotic margin not positive");
    }
  }
  CHECK(r1_rows >= 40, "r = 1 sweep unexpectedly small: " << r1_rows);
  return ok;
}

}  // namespace

int main() {
  struct Criterion {
    const char* label;
    std::function<bool()> run;
  };
  const std::vector<Criterion> criteria = {
      {"closed-form Gram matrix equals the cyclotomic oracle on every field "
       "(phi <= 120)",
       criterion_gram_oracle},
      {"orthogonal block decomposition verified entrywise; det = p^upsilon",
       criterion_decomposition},
      {"exact identities of the bound chain hold across the sweep",
       criterion_bound_identities},
      {"omega cube bound (omega <= 3^(-2/3)) holds for every field with r >= 2",
       criterion_omega_cube},
      {"imaginary quadratic minima equal (p+1)^2/(16p) and match the bound chain",
       criterion_imaginary_quadratic},
      {"survey of even e <= 200 fully resolved; every h verdict recertified "
       "exactly",
       criterion_survey},
      {"randomized deep-hole search attains the known covering radii",
       criterion_deep_holes},
      {"epsilon identity at r = 1 and asymptotic log bracket at r >= 2",
       criterion_epsilon},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    bool pass = false;
    std::string error;
    try {
      pass = criteria[i].run();
    } catch (const std::exception& ex) {
      error = ex.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    std::cout << (pass ? "[PASS] " : "[FAIL] ") << "criterion " << (i + 1)
              << ": " << criteria[i].label << " (" << std::fixed
              << std::setprecision(1) << secs << "s)\n";
    if (!error.empty()) std::cout << "       exception: " << error << "\n";
    if (!pass) ++failures;
  }
  std::cout << (criteria.size() - failures) << "/" << criteria.size()
            << " criteria passed\n";
  return failures == 0 ? 0 : 1;
}
