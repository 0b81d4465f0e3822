#pragma once

#include "traceform/bounds.hpp"
#include "traceform/lattice.hpp"
#include "traceform/scan.hpp"

#include <json.hpp>

#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace traceform {

using Json = nlohmann::ordered_json;

// Structural description of an orthogonal block: the L_{b,m} family member
// and the integer scale, not the expanded matrix (ranks can reach p - 1).
struct BlockDesc {
  std::string kind;
  Int multiplicity;
  std::size_t rank = 0;
  Rat family_b;
  std::size_t family_m = 0;
  Int scale;

  friend bool operator==(const BlockDesc&, const BlockDesc&) = default;
};

struct LatticeSection {
  Rat max_bound_value;
  Rat tau_coeff;
  Rat tau_exponent;
  double tau_approx = 0.0;
  std::string tau_note;
  std::vector<BlockDesc> blocks;

  friend bool operator==(const LatticeSection&, const LatticeSection&) = default;
};

struct VerificationCheck {
  std::string name;
  bool pass = false;
  std::string detail;

  friend bool operator==(const VerificationCheck&, const VerificationCheck&) = default;
};

struct VerificationSection {
  bool pass = false;
  std::vector<VerificationCheck> checks;
  Int n_value;
  Int upsilon_value;

  friend bool operator==(const VerificationSection&, const VerificationSection&) = default;
};

struct ReportDocument {
  std::string schema_version = "1";
  std::optional<FieldParams> params;
  std::optional<BoundsReport> bounds;
  std::optional<LatticeSection> lattice;
  std::optional<VerificationSection> verification;

  friend bool operator==(const ReportDocument&, const ReportDocument&) = default;
};

inline LatticeSection make_lattice_section(const FieldParams& fp) {
  LatticeSection s;
  s.max_bound_value = max_bound(fp);
  TauUpper t = tau_upper(fp);
  s.tau_coeff = t.coeff;
  s.tau_exponent = t.exponent;
  s.tau_approx = t.approx;
  s.tau_note = "upper bound at alpha = 1; not claimed to be the infimum over scalings";
  const Int pr1 = fp.conductor / fp.p;
  BlockDesc zero{"zero_fiber", Int(1), static_cast<std::size_t>(to_u64(fp.d, "d")),
                 make_rat(fp.p, fp.e), static_cast<std::size_t>(to_u64(fp.d, "d")),
                 Int(fp.e * pr1)};
  s.blocks.push_back(std::move(zero));
  Int mult = delta_n_value(fp);
  if (mult > 0) {
    BlockDesc nz{"nonzero_fiber", mult, static_cast<std::size_t>(to_u64(fp.p - 1, "p-1")),
                 Rat(fp.p), static_cast<std::size_t>(to_u64(fp.p - 1, "p-1")), pr1};
    s.blocks.push_back(std::move(nz));
  }
  return s;
}

namespace detail {

inline Json rat_to_json(const Rat& q) {
  return Json{{"num", dec_string(q.get_num())},
              {"den", dec_string(q.get_den())},
              {"approx", pow_to_double(q, 1.0)}};
}

inline Rat rat_from_json(const Json& j) {
  Rat q = make_rat(Int(j.at("num").get<std::string>()),
                   Int(j.at("den").get<std::string>()));
  return q;
}

inline Json prime_power_to_json(const Int& base, const Int& exp) {
  return Json{{"base", dec_string(base)}, {"exp", dec_string(exp)}};
}

}  // namespace detail

inline Json to_json(const ReportDocument& doc) {
  Json j;
  j["schema_version"] = doc.schema_version;
  if (doc.params) {
    const FieldParams& fp = *doc.params;
    j["params"] = Json{{"p", dec_string(fp.p)},     {"r", fp.r},
                       {"e", dec_string(fp.e)},     {"n", dec_string(fp.n)},
                       {"d", dec_string(fp.d)},     {"phi", dec_string(fp.phi)},
                       {"conductor", dec_string(fp.conductor)},
                       {"totally_real", fp.totally_real}};
  }
  if (doc.bounds) {
    const BoundsReport& b = *doc.bounds;
    Json jb;
    jb["upsilon"] = dec_string(b.upsilon_value);
    jb["discriminant"] = detail::prime_power_to_json(b.disc_base, b.disc_exp);
    jb["f"] = detail::rat_to_json(b.f);
    jb["c_display"] = b.c_display;
    jb["epsilon"] = detail::rat_to_json(b.epsilon);
    jb["epsilon_display"] = b.epsilon_display;
    jb["delta"] = detail::rat_to_json(b.delta);
    jb["delta_n"] = dec_string(b.delta_n);
    jb["omega_sq_2n"] = detail::rat_to_json(b.omega_sq_2n);
    jb["omega_display"] = b.omega_display;
    jb["minima_bound_sq"] = detail::rat_to_json(b.minima_bound_sq);
    jb["minima_bound_display"] = b.minima_bound_display;
    jb["minkowski_cert"] = detail::rat_to_json(b.minkowski_cert);
    jb["minkowski_ok"] = b.minkowski_ok;
    j["bounds"] = std::move(jb);
  }
  if (doc.lattice) {
    const LatticeSection& s = *doc.lattice;
    Json jl;
    jl["max_bound"] = detail::rat_to_json(s.max_bound_value);
    jl["tau_upper"] = Json{{"coeff", detail::rat_to_json(s.tau_coeff)},
                           {"p_exponent", detail::rat_to_json(s.tau_exponent)},
                           {"approx", s.tau_approx}};
    jl["tau_note"] = s.tau_note;
    Json blocks = Json::array();
    for (const BlockDesc& b : s.blocks)
      blocks.push_back(Json{{"kind", b.kind},
                            {"multiplicity", dec_string(b.multiplicity)},
                            {"rank", b.rank},
                            {"family_b", detail::rat_to_json(b.family_b)},
                            {"family_m", b.family_m},
                            {"scale", dec_string(b.scale)}});
    jl["blocks"] = std::move(blocks);
    j["lattice"] = std::move(jl);
  }
  if (doc.verification) {
    const VerificationSection& v = *doc.verification;
    Json jv;
    jv["pass"] = v.pass;
    jv["n"] = dec_string(v.n_value);
    jv["upsilon"] = dec_string(v.upsilon_value);
    Json checks = Json::array();
    for (const VerificationCheck& c : v.checks)
      checks.push_back(Json{{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    jv["checks"] = std::move(checks);
    j["verification"] = std::move(jv);
  }
  return j;
}

// Inverse of to_json. Field parameters are rebuilt through the validating
// constructor and the serialized derived values are cross-checked, so a
// tampered document fails loudly instead of parsing into nonsense.
inline ReportDocument report_from_json(const Json& j) {
  ReportDocument doc;
  doc.schema_version = j.at("schema_version").get<std::string>();
  if (j.contains("params")) {
    const Json& jp = j.at("params");
    FieldParams fp = make_field_params(Int(jp.at("p").get<std::string>()),
                                       jp.at("r").get<unsigned>(),
                                       Int(jp.at("e").get<std::string>()));
    if (dec_string(fp.n) != jp.at("n").get<std::string>() ||
        dec_string(fp.d) != jp.at("d").get<std::string>() ||
        dec_string(fp.phi) != jp.at("phi").get<std::string>() ||
        dec_string(fp.conductor) != jp.at("conductor").get<std::string>() ||
        fp.totally_real != jp.at("totally_real").get<bool>())
      throw std::invalid_argument("derived parameter fields do not match (p, r, e)");
    doc.params = std::move(fp);
  }
  if (j.contains("bounds")) {
    if (!doc.params) throw std::invalid_argument("bounds section without params");
    const Json& jb = j.at("bounds");
    BoundsReport b;
    b.params = *doc.params;
    b.upsilon_value = Int(jb.at("upsilon").get<std::string>());
    b.disc_base = Int(jb.at("discriminant").at("base").get<std::string>());
    b.disc_exp = Int(jb.at("discriminant").at("exp").get<std::string>());
    b.f = detail::rat_from_json(jb.at("f"));
    b.c_display = jb.at("c_display").get<double>();
    b.epsilon = detail::rat_from_json(jb.at("epsilon"));
    b.epsilon_display = jb.at("epsilon_display").get<double>();
    b.delta = detail::rat_from_json(jb.at("delta"));
    b.delta_n = Int(jb.at("delta_n").get<std::string>());
    b.omega_sq_2n = detail::rat_from_json(jb.at("omega_sq_2n"));
    b.omega_display = jb.at("omega_display").get<double>();
    b.minima_bound_sq = detail::rat_from_json(jb.at("minima_bound_sq"));
    b.minima_bound_display = jb.at("minima_bound_display").get<double>();
    b.minkowski_cert = detail::rat_from_json(jb.at("minkowski_cert"));
    b.minkowski_ok = jb.at("minkowski_ok").get<bool>();
    doc.bounds = std::move(b);
  }
  if (j.contains("lattice")) {
    const Json& jl = j.at("lattice");
    LatticeSection s;
    s.max_bound_value = detail::rat_from_json(jl.at("max_bound"));
    s.tau_coeff = detail::rat_from_json(jl.at("tau_upper").at("coeff"));
    s.tau_exponent = detail::rat_from_json(jl.at("tau_upper").at("p_exponent"));
    s.tau_approx = jl.at("tau_upper").at("approx").get<double>();
    s.tau_note = jl.at("tau_note").get<std::string>();
    for (const Json& bj : jl.at("blocks")) {
      BlockDesc b;
      b.kind = bj.at("kind").get<std::string>();
      b.multiplicity = Int(bj.at("multiplicity").get<std::string>());
      b.rank = bj.at("rank").get<std::size_t>();
      b.family_b = detail::rat_from_json(bj.at("family_b"));
      b.family_m = bj.at("family_m").get<std::size_t>();
      b.scale = Int(bj.at("scale").get<std::string>());
      s.blocks.push_back(std::move(b));
    }
    doc.lattice = std::move(s);
  }
  if (j.contains("verification")) {
    const Json& jv = j.at("verification");
    VerificationSection v;
    v.pass = jv.at("pass").get<bool>();
    v.n_value = Int(jv.at("n").get<std::string>());
    v.upsilon_value = Int(jv.at("upsilon").get<std::string>());
    for (const Json& cj : jv.at("checks"))
      v.checks.push_back(VerificationCheck{cj.at("name").get<std::string>(),
                                           cj.at("pass").get<bool>(),
                                           cj.at("detail").get<std::string>()});
    doc.verification = std::move(v);
  }
  return doc;
}

inline std::string rat_cell(const Rat& q) {
  if (q.get_den() == 1) return dec_string(q.get_num());
  return dec_string(q.get_num()) + "/" + dec_string(q.get_den());
}

// Flat two-column CSV of an analyze document.
inline std::string to_csv(const ReportDocument& doc) {
  std::ostringstream os;
  os << "field,value\n";
  os << "schema_version," << doc.schema_version << "\n";
  if (doc.params) {
    const FieldParams& fp = *doc.params;
    os << "p," << dec_string(fp.p) << "\n";
    os << "r," << fp.r << "\n";
    os << "e," << dec_string(fp.e) << "\n";
    os << "n," << dec_string(fp.n) << "\n";
    os << "d," << dec_string(fp.d) << "\n";
    os << "phi," << dec_string(fp.phi) << "\n";
    os << "conductor," << dec_string(fp.conductor) << "\n";
    os << "totally_real," << (fp.totally_real ? "true" : "false") << "\n";
  }
  if (doc.bounds) {
    const BoundsReport& b = *doc.bounds;
    os << "upsilon," << dec_string(b.upsilon_value) << "\n";
    os << "discriminant," << dec_string(b.disc_base) << "^" << dec_string(b.disc_exp)
       << "\n";
    os << "f," << rat_cell(b.f) << "\n";
    os << "epsilon," << rat_cell(b.epsilon) << "\n";
    os << "delta," << rat_cell(b.delta) << "\n";
    os << "delta_n," << dec_string(b.delta_n) << "\n";
    os << "omega_sq_2n," << rat_cell(b.omega_sq_2n) << "\n";
    os << "minima_bound_sq," << rat_cell(b.minima_bound_sq) << "\n";
    os << "minkowski_cert," << rat_cell(b.minkowski_cert) << "\n";
    os << "minkowski_ok," << (b.minkowski_ok ? "true" : "false") << "\n";
  }
  if (doc.lattice) {
    const LatticeSection& s = *doc.lattice;
    os << "max_bound," << rat_cell(s.max_bound_value) << "\n";
    os << "tau_coeff," << rat_cell(s.tau_coeff) << "\n";
    os << "tau_p_exponent," << rat_cell(s.tau_exponent) << "\n";
  }
  return os.str();
}

inline const char* scan_csv_header() { return "e,p,n,verdict,h,method,certified,gap_log10"; }

inline std::string scan_row_csv(const ScanVerdict& row) {
  std::ostringstream os;
  os << row.e << "," << row.p << "," << row.n << "," << to_string(row.outcome) << ",";
  if (row.h) {
    os.precision(17);
    os << row.h->h_value << "," << to_string(row.h->method) << ","
       << (row.h->leq_one ? "true" : "false") << "," << row.h->gap_log10;
  } else {
    os << ",,,";
  }
  return os.str();
}

inline Json scan_row_json(const ScanVerdict& row) {
  Json j{{"e", row.e}, {"p", row.p}, {"n", row.n}, {"verdict", to_string(row.outcome)}};
  if (row.h) {
    j["h"] = row.h->h_value;
    j["method"] = to_string(row.h->method);
    j["certified"] = row.h->leq_one;
    j["gap_log10"] = row.h->gap_log10;
  }
  return j;
}

}  // namespace traceform
