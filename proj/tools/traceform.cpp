// traceform: exact arithmetic for trace-form lattices of abelian fields of
// odd prime power conductor. Subcommands:
//   analyze  p r e   exact bound chain (f, epsilon, omega, Minkowski cert)
//   verify   p r e   rebuild the period Gram matrix two ways and check the
//                    orthogonal block decomposition and determinant
//   scan             survey admissible primes for each even e and certify
//                    the Minkowski criterion via the h function
// Exit codes: 0 success / all checks pass, 1 a check or certification
// failed, 2 usage or domain error.

#include <CLI11.hpp>

#include "traceform/bounds.hpp"
#include "traceform/cyclotomic.hpp"
#include "traceform/deep_hole.hpp"
#include "traceform/lattice.hpp"
#include "traceform/period_basis.hpp"
#include "traceform/report.hpp"
#include "traceform/residue_orbits.hpp"
#include "traceform/scan.hpp"

#include <unistd.h>

#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <string>

namespace {

using namespace traceform;

bool color_enabled() {
  if (std::getenv("NO_COLOR") != nullptr) return false;
  return isatty(STDOUT_FILENO) == 1;
}

const char* kBold = "\033[1m";
const char* kGreen = "\033[32m";
const char* kRed = "\033[31m";
const char* kReset = "\033[0m";

std::string paint(const std::string& s, const char* code) {
  if (!color_enabled()) return s;
  return std::string(code) + s + kReset;
}

Int parse_int_arg(const std::string& s, const char* what) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
    throw std::invalid_argument(std::string(what) + " must be a nonnegative integer");
  return Int(s);
}

void write_output(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) throw std::invalid_argument("cannot open output file: " + out_path);
  f << text;
}

struct AnalyzeArgs {
  std::string p, e;
  unsigned r = 1;
  bool json = false, csv = false;
  std::string out;
  unsigned long exponent_cap = 1000000;
  bool timestamp = false;
};

int cmd_analyze(const AnalyzeArgs& args) {
  FieldParams fp = make_field_params(parse_int_arg(args.p, "p"), args.r,
                                     parse_int_arg(args.e, "e"));
  if (fp.n < 2) throw std::invalid_argument("degree n must be >= 2");
  if (Int(fp.r) * fp.n > static_cast<unsigned long>(args.exponent_cap))
    throw std::invalid_argument(
        "r*n exceeds the exact-power cap (raise with --exponent-cap)");

  ReportDocument doc;
  doc.params = fp;
  doc.bounds = compute_report(fp);
  doc.lattice = make_lattice_section(fp);

  std::string text;
  if (args.json) {
    Json j = to_json(doc);
    if (args.timestamp) j["generated_at"] = static_cast<long>(::time(nullptr));
    text = j.dump(2) + "\n";
  } else if (args.csv) {
    text = to_csv(doc);
  } else {
    const BoundsReport& b = *doc.bounds;
    std::ostringstream os;
    os << paint("field", kBold) << "  p=" << dec_string(fp.p) << " r=" << fp.r
       << " e=" << dec_string(fp.e) << "  (n=" << dec_string(fp.n)
       << ", conductor=" << dec_string(fp.conductor)
       << (fp.totally_real ? ", totally real" : ", totally imaginary") << ")\n";
    os << "  discriminant        " << dec_string(b.disc_base) << "^"
       << dec_string(b.disc_exp) << "\n";
    os << "  f                   " << rat_cell(b.f) << "  (C = sqrt(f) ~ "
       << b.c_display << ")\n";
    os << "  epsilon             " << rat_cell(b.epsilon) << "  (~" << b.epsilon_display
       << ")\n";
    os << "  delta               " << rat_cell(b.delta)
       << "  (n*delta = " << dec_string(b.delta_n) << ")\n";
    os << "  omega               ~" << b.omega_display
       << "  (omega^{2n} = " << rat_cell(b.omega_sq_2n) << ")\n";
    os << "  minima bound        ~" << b.minima_bound_display
       << "  (squared: " << rat_cell(b.minima_bound_sq) << ")\n";
    os << "  minkowski cert      " << rat_cell(b.minkowski_cert) << "\n";
    os << "  minkowski verdict   "
       << (b.minkowski_ok ? paint("holds (cert <= 1)", kGreen)
                          : paint("not established (cert > 1)", kRed))
       << "\n";
    os << "  max(q) bound        " << rat_cell(doc.lattice->max_bound_value) << "\n";
    os << "  tau upper           " << rat_cell(doc.lattice->tau_coeff) << " * p^("
       << rat_cell(doc.lattice->tau_exponent) << ")  ~" << doc.lattice->tau_approx
       << "  [" << doc.lattice->tau_note << "]\n";
    text = os.str();
  }
  write_output(text, args.out);
  return 0;
}

struct VerifyArgs {
  std::string p, e;
  unsigned r = 1;
  unsigned long cap = 240;
  bool json = false;
  unsigned long deep_hole_trials = 0;
  std::uint64_t seed = 0;
  bool inject_perturbation = false;
  std::string out;
};

int cmd_verify(const VerifyArgs& args) {
  FieldParams fp = make_field_params(parse_int_arg(args.p, "p"), args.r,
                                     parse_int_arg(args.e, "e"));
  if (fp.n < 2) throw std::invalid_argument("degree n must be >= 2");
  if (fp.phi > static_cast<unsigned long>(args.cap))
    throw std::invalid_argument("phi(p^r) = " + dec_string(fp.phi) +
                                " exceeds the cap (raise with --cap)");

  OrbitSpace space(fp);
  PeriodBasis basis = build_basis(space);
  CyclotomicRing ring(fp);
  GramMatrix oracle = ring.gram_oracle(space, basis);
  if (args.inject_perturbation) oracle.at(0, 0) += 1;

  VerificationSection v;
  v.n_value = fp.n;
  v.upsilon_value = upsilon(fp);

  BasisConditionReport bc = verify_basis_conditions(space, basis.a_orbits);
  v.checks.push_back({"basis_conditions", bc.ok(),
                      bc.ok() ? "complement is a section; fiber counts match"
                              : "basis conditions violated"});

  GramMatrix closed = gram_closed_form(space, basis);
  const bool closed_ok = closed == oracle;
  v.checks.push_back({"gram_closed_form_equals_oracle", closed_ok,
                      closed_ok ? "all entries agree" : "entry mismatch"});

  DecompositionVerdict dv =
      verify_decomposition(oracle, space, basis, expected_blocks(fp));
  v.checks.push_back({"orthogonal_block_decomposition", dv.ok,
                      dv.ok ? "oracle splits into the expected blocks"
                            : dv.what + " at (" + std::to_string(dv.row) + "," +
                                  std::to_string(dv.col) + ")"});

  const Rat det = det_exact(oracle);
  const bool det_ok = det == Rat(pow_int(fp.p, to_ulong(v.upsilon_value, "upsilon")));
  v.checks.push_back({"determinant_p_upsilon", det_ok,
                      det_ok ? "det = p^upsilon" : "det = " + rat_cell(det)});

  const bool pd_ok = is_positive_definite(oracle);
  v.checks.push_back({"positive_definite", pd_ok,
                      pd_ok ? "all leading principal minors positive"
                            : "a leading principal minor is <= 0"});

  if (args.deep_hole_trials > 0) {
    bool dh_ok = true;
    std::ostringstream detail;
    for (const BlockSpec& blk : expected_blocks(fp)) {
      if (blk.rank > 8) {
        detail << to_string(blk.kind) << ": skipped (rank > 8); ";
        continue;
      }
      const double found =
          deep_hole_lower_bound(blk.gram, args.deep_hole_trials, args.seed);
      const Int pr1 = fp.conductor / fp.p;
      const Rat bound = blk.kind == BlockKind::nonzero_fiber
                            ? max_Lp_exact(fp.p) * Rat(pr1)
                            : max_Lped_bound(fp) * Rat(fp.e * pr1);
      const double bound_d = pow_to_double(bound, 1.0);
      if (found > bound_d * (1.0 + 1e-9) + 1e-12) dh_ok = false;
      detail << to_string(blk.kind) << ": found " << found << " <= bound " << bound_d
             << "; ";
    }
    v.checks.push_back({"deep_hole_within_max_bound", dh_ok, detail.str()});
  }

  v.pass = true;
  for (const VerificationCheck& c : v.checks) v.pass = v.pass && c.pass;

  ReportDocument doc;
  doc.params = fp;
  doc.verification = v;

  std::string text;
  if (args.json) {
    text = to_json(doc).dump(2) + "\n";
  } else {
    std::ostringstream os;
    os << paint("verify", kBold) << "  p=" << dec_string(fp.p) << " r=" << fp.r
       << " e=" << dec_string(fp.e) << "  (n=" << dec_string(fp.n) << ")\n";
    for (const VerificationCheck& c : v.checks)
      os << "  " << (c.pass ? paint("[pass]", kGreen) : paint("[FAIL]", kRed)) << " "
         << c.name << ": " << c.detail << "\n";
    os << (v.pass ? paint("all checks passed", kGreen)
                  : paint("verification FAILED", kRed))
       << "\n";
    text = os.str();
  }
  write_output(text, args.out);
  return v.pass ? 0 : 1;
}

struct ScanArgs {
  std::uint64_t e = 0;
  std::uint64_t all_e_up_to = 0;
  std::uint64_t pmax = 0;
  std::size_t jobs = 1;
  bool exact = false;
  bool json = false;
  std::string out;
};

int cmd_scan(const ScanArgs& args) {
  ScanSummary summary;
  if (args.all_e_up_to > 0) {
    if (args.pmax != 0)
      throw std::invalid_argument("--pmax applies to --e, not --all-e-up-to");
    summary = scan_range(args.all_e_up_to, args.jobs, args.exact);
  } else {
    summary.rows = scan_Se(args.e, args.pmax, args.exact);
    for (const ScanVerdict& row : summary.rows)
      if (row.outcome == ScanOutcome::unresolved) ++summary.unresolved;
  }

  std::ostringstream os;
  if (args.json) {
    for (const ScanVerdict& row : summary.rows) os << scan_row_json(row).dump() << "\n";
    os << Json{{"summary", Json{{"rows", summary.rows.size()},
                                {"unresolved", summary.unresolved}}}}
              .dump()
       << "\n";
  } else {
    os << scan_csv_header() << "\n";
    for (const ScanVerdict& row : summary.rows) os << scan_row_csv(row) << "\n";
  }
  write_output(os.str(), args.out);
  std::cerr << "scanned " << summary.rows.size() << " pairs, " << summary.unresolved
            << " unresolved\n";
  return summary.unresolved == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "exact trace-form lattice toolkit for abelian fields of odd prime power "
      "conductor"};
  app.require_subcommand(1);

  AnalyzeArgs aa;
  CLI::App* analyze = app.add_subcommand(
      "analyze", "exact bound chain (discriminant, f, epsilon, omega, Minkowski)");
  analyze->add_option("p", aa.p, "odd prime")->required();
  analyze->add_option("r", aa.r, "conductor exponent (>= 1)")->required();
  analyze->add_option("e", aa.e, "divisor of p-1 (cyclotomic index)")->required();
  analyze->add_flag("--json", aa.json, "emit a JSON document");
  analyze->add_flag("--csv", aa.csv, "emit flat CSV");
  analyze->add_option("--out", aa.out, "write to a file instead of stdout");
  analyze->add_option("--exponent-cap", aa.exponent_cap,
                      "refuse exact powers when r*n exceeds this (default 10^6)");
  analyze->add_flag("--timestamp", aa.timestamp,
                    "include a generation timestamp in JSON output");

  VerifyArgs va;
  CLI::App* verify = app.add_subcommand(
      "verify", "rebuild the Gram matrix independently and check the decomposition");
  verify->add_option("p", va.p, "odd prime")->required();
  verify->add_option("r", va.r, "conductor exponent (>= 1)")->required();
  verify->add_option("e", va.e, "divisor of p-1 (cyclotomic index)")->required();
  verify->add_option("--cap", va.cap, "largest phi(p^r) accepted (default 240)");
  verify->add_flag("--json", va.json, "emit a JSON document");
  verify->add_option("--deep-hole-trials", va.deep_hole_trials,
                     "also run the randomized deep-hole search per block");
  verify->add_option("--seed", va.seed, "deep-hole search seed (default 0)");
  verify->add_option("--out", va.out, "write to a file instead of stdout");
  verify
      ->add_flag("--inject-perturbation", va.inject_perturbation,
                 "perturb one oracle entry (negative control)")
      ->group("");  // hidden

  ScanArgs sa;
  CLI::App* scan = app.add_subcommand(
      "scan", "survey admissible primes per even e and certify the h criterion");
  CLI::Option* opt_e = scan->add_option("--e", sa.e, "single even e to scan");
  CLI::Option* opt_all =
      scan->add_option("--all-e-up-to", sa.all_e_up_to, "scan every even e up to this");
  opt_e->excludes(opt_all);
  opt_all->excludes(opt_e);
  scan->add_option("--pmax", sa.pmax,
                   "prime horizon for --e (default 2e^2; beyond that pairs get the "
                   "threshold verdict)");
  scan->add_option("--jobs", sa.jobs, "worker threads for --all-e-up-to (default 1)");
  scan->add_flag("--exact", sa.exact,
                 "always compute the exact integer certificate (skip fast stages)");
  scan->add_flag("--json", sa.json, "emit JSON lines instead of CSV");
  scan->add_option("--out", sa.out, "write records to a file instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (*analyze) return cmd_analyze(aa);
    if (*verify) return cmd_verify(va);
    if (*scan) {
      if (sa.e == 0 && sa.all_e_up_to == 0)
        throw std::invalid_argument("scan needs --e or --all-e-up-to");
      return cmd_scan(sa);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::overflow_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
