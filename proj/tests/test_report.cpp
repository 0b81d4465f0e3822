#include <catch2/catch_amalgamated.hpp>

#include "traceform/report.hpp"

#include <string>
#include <tuple>
#include <vector>

using namespace traceform;

namespace {

ReportDocument analyze_doc(long p, unsigned r, long e) {
  ReportDocument doc;
  doc.params = make_field_params(Int(p), r, Int(e));
  doc.bounds = compute_report(*doc.params);
  doc.lattice = make_lattice_section(*doc.params);
  return doc;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      cells.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  cells.push_back(cur);
  return cells;
}

}  // namespace

TEST_CASE("JSON round trip preserves analyze documents exactly", "[report]") {
  const std::vector<std::tuple<long, unsigned, long>> cases = {
      {5, 1, 2}, {3, 2, 2}, {7, 1, 3}};
  for (auto [p, r, e] : cases) {
    ReportDocument doc = analyze_doc(p, r, e);
    Json j = to_json(doc);
    REQUIRE(report_from_json(j) == doc);
    // ... and through an actual serialized string, doubles included
    REQUIRE(report_from_json(Json::parse(j.dump())) == doc);
    REQUIRE(report_from_json(Json::parse(j.dump(2))) == doc);
  }
}

TEST_CASE("JSON round trip preserves verification documents", "[report]") {
  ReportDocument doc;
  doc.params = make_field_params(3, 2, 2);
  VerificationSection v;
  v.pass = true;
  v.n_value = 3;
  v.upsilon_value = 4;
  v.checks.push_back({"basis_conditions", true, "section bijective; fibers complete"});
  v.checks.push_back({"gram_closed_form_equals_oracle", true, "9 entries"});
  doc.verification = std::move(v);

  REQUIRE(report_from_json(to_json(doc)) == doc);
  REQUIRE(report_from_json(Json::parse(to_json(doc).dump())) == doc);
}

TEST_CASE("serialization is deterministic across recomputation", "[report]") {
  const std::string a = to_json(analyze_doc(5, 1, 2)).dump(2);
  const std::string b = to_json(analyze_doc(5, 1, 2)).dump(2);
  REQUIRE(a == b);
  REQUIRE(a.find("\"schema_version\": \"1\"") != std::string::npos);
  // key order is part of the contract (ordered_json)
  REQUIRE(a.find("\"params\"") < a.find("\"bounds\""));
  REQUIRE(a.find("\"bounds\"") < a.find("\"lattice\""));
}

TEST_CASE("tampered documents are rejected", "[report]") {
  Json j = to_json(analyze_doc(5, 1, 2));
  j["params"]["n"] = "3";  // inconsistent with (p, r, e)
  REQUIRE_THROWS_AS(report_from_json(j), std::invalid_argument);

  Json missing = to_json(analyze_doc(5, 1, 2));
  missing.erase("schema_version");
  REQUIRE_THROWS_AS(report_from_json(missing), Json::out_of_range);

  Json bad_params = to_json(analyze_doc(5, 1, 2));
  bad_params["params"]["p"] = "4";
  REQUIRE_THROWS_AS(report_from_json(bad_params), std::invalid_argument);
}

TEST_CASE("block descriptions carry family and scale, not expanded matrices",
          "[report]") {
  LatticeSection five = make_lattice_section(make_field_params(5, 1, 2));
  REQUIRE(five.blocks.size() == 1);
  REQUIRE(five.blocks[0].kind == "zero_fiber");
  REQUIRE(five.blocks[0].multiplicity == 1);
  REQUIRE(five.blocks[0].rank == 2);
  REQUIRE(five.blocks[0].family_b == make_rat(5, 2));
  REQUIRE(five.blocks[0].family_m == 2);
  REQUIRE(five.blocks[0].scale == 2);
  REQUIRE(five.max_bound_value == make_rat(9, 10));
  REQUIRE(five.tau_coeff == make_rat(9, 50));
  REQUIRE(five.tau_exponent == make_rat(1, 2));

  LatticeSection nine = make_lattice_section(make_field_params(3, 2, 2));
  REQUIRE(nine.blocks.size() == 2);
  REQUIRE(nine.blocks[0].kind == "zero_fiber");
  REQUIRE(nine.blocks[0].rank == 1);
  REQUIRE(nine.blocks[0].family_b == make_rat(3, 2));
  REQUIRE(nine.blocks[0].scale == 6);
  REQUIRE(nine.blocks[1].kind == "nonzero_fiber");
  REQUIRE(nine.blocks[1].multiplicity == 1);
  REQUIRE(nine.blocks[1].rank == 2);
  REQUIRE(nine.blocks[1].family_b == 3);
  REQUIRE(nine.blocks[1].family_m == 2);
  REQUIRE(nine.blocks[1].scale == 3);
}

TEST_CASE("flat CSV of the real quadratic field of conductor 5", "[report]") {
  const std::string expected =
      "field,value\n"
      "schema_version,1\n"
      "p,5\n"
      "r,1\n"
      "e,2\n"
      "n,2\n"
      "d,2\n"
      "phi,4\n"
      "conductor,5\n"
      "totally_real,true\n"
      "upsilon,1\n"
      "discriminant,5^1\n"
      "f,9/100\n"
      "epsilon,2\n"
      "delta,0\n"
      "delta_n,0\n"
      "omega_sq_2n,81/2000\n"
      "minima_bound_sq,81/400\n"
      "minkowski_cert,81/125\n"
      "minkowski_ok,true\n"
      "max_bound,9/10\n"
      "tau_coeff,9/50\n"
      "tau_p_exponent,1/2\n";
  REQUIRE(to_csv(analyze_doc(5, 1, 2)) == expected);
}

TEST_CASE("scan rows serialize to fixed-width CSV and flat JSON", "[report]") {
  REQUIRE(std::string(scan_csv_header()) ==
          "e,p,n,verdict,h,method,certified,gap_log10");

  std::vector<ScanVerdict> s6 = scan_Se(6);

  // a degree-settled row has empty h cells
  std::vector<std::string> cells = split_csv(scan_row_csv(s6[0]));
  REQUIRE(cells.size() == 8);
  REQUIRE(cells[0] == "6");
  REQUIRE(cells[1] == "13");
  REQUIRE(cells[2] == "2");
  REQUIRE(cells[3] == "degree_le_8");
  REQUIRE(cells[4].empty());
  REQUIRE(cells[5].empty());
  REQUIRE(cells[6].empty());
  REQUIRE(cells[7].empty());

  // an h-certified row carries the display value and the method
  std::vector<std::string> hc = split_csv(scan_row_csv(s6[5]));
  REQUIRE(hc.size() == 8);
  REQUIRE(hc[1] == "61");
  REQUIRE(hc[3] == "minkowski_by_h");
  REQUIRE(std::stod(hc[4]) == Catch::Approx(0.50633243877009182).epsilon(1e-15));
  REQUIRE(hc[5] == "bit_length");
  REQUIRE(hc[6] == "true");
  REQUIRE(std::stod(hc[7]) < 0.0);

  Json deg = scan_row_json(s6[0]);
  REQUIRE(deg.size() == 4);
  REQUIRE_FALSE(deg.contains("h"));
  REQUIRE(deg["verdict"] == "degree_le_8");

  Json hj = scan_row_json(s6[5]);
  REQUIRE(hj["e"] == 6);
  REQUIRE(hj["p"] == 61);
  REQUIRE(hj["verdict"] == "minkowski_by_h");
  REQUIRE(hj["method"] == "bit_length");
  REQUIRE(hj["certified"] == true);
  REQUIRE(hj["gap_log10"].get<double>() < 0.0);
}
