#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "molmip/mps.hpp"
#include "molmip/pipeline.hpp"
#include "molmip/solver.hpp"

using namespace molmip;

namespace {

MipModel golden_model() {
  MipModel m("golden");
  const int x = m.add_variable("x", 0, 4);
  const int y = m.add_variable("y", -1.5, kInf);
  const int b = m.add_binary("b");
  m.add_constraint("cap", {{x, 1}, {y, 2}, {b, -3}}, Sense::LessEqual, 7);
  m.add_constraint("link", {{x, 1}, {b, -4}}, Sense::GreaterEqual, 0);
  m.add_constraint("bal", {{x, 0.1}, {y, 1}}, Sense::Equal, 1.25);
  m.set_objective(ObjSense::Maximize, {{x, 1}, {y, -0.5}, {b, 1125899906842624.0}});
  return m;
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_SUITE("mps") {
TEST_CASE("number formatting is exact") {
  CHECK(format_number(3.0) == "3");
  CHECK(format_number(-0.5) == "-0.5");
  CHECK(format_number(1125899906842624.0) == "1125899906842624");
  for (double v : {0.1, 1.0 / 3.0, -2.718281828459045, 1e-300, 6.02214076e23})
    CHECK(std::stod(format_number(v)) == v);
}

TEST_CASE("empty-constraint model carries only bounds") {
  MipModel m("bare");
  m.add_variable("x", -1, 2);
  m.add_binary("b");
  const std::string text = to_mps(m);
  CHECK(text.find("ROWS\n N  obj\nCOLUMNS") != std::string::npos);
  const MipModel back = mps_from_string(text);
  CHECK(back.num_variables() == 2);
  CHECK(back.num_constraints() == 0);
  CHECK(back.variable(0).lower == -1.0);
  CHECK(back.variable(1).type == VarType::Binary);
  CHECK(to_mps(back) == text);
}

TEST_CASE("golden file") {
  CHECK(to_mps(golden_model()) == read_file(MOLMIP_TEST_DATA "/golden.mps"));
  const MipModel parsed = parse_mps(MOLMIP_TEST_DATA "/golden.mps");
  CHECK(parsed.objective().sense == ObjSense::Maximize);
  CHECK(parsed.objective().terms[2].coef == 1125899906842624.0);
  CHECK(parsed.constraints()[2].terms[0].coef == 0.1);
  CHECK(parsed.variable(1).upper == kInf);
}

TEST_CASE("emit, parse, emit is byte-identical for a design model") {
  const auto prob = build_design_problem(fixture_network(0, 4, 14), banana_space(4), case_options(CaseStudy::Banana));
  const std::string first = to_mps(prob.model);
  const MipModel parsed = mps_from_string(first);
  CHECK(parsed.num_variables() == prob.model.num_variables());
  CHECK(parsed.num_constraints() == prob.model.num_constraints());
  CHECK(to_mps(parsed) == first);
}

TEST_CASE("file output and LP text") {
  const auto dir = std::filesystem::temp_directory_path() / "molmip_mps_test";
  std::filesystem::create_directories(dir);
  emit_mps(golden_model(), dir / "g.mps");
  CHECK(read_file(dir / "g.mps") == to_mps(golden_model()));
  emit_lp(golden_model(), dir / "g.lp");
  const std::string lp = read_file(dir / "g.lp");
  CHECK(lp.find("Maximize") != std::string::npos);
  CHECK(lp.find("cap: 1 x + 2 y - 3 b <= 7") != std::string::npos);
  CHECK(lp.find("Binaries\n b\n") != std::string::npos);
  std::filesystem::remove_all(dir);
  CHECK_THROWS(emit_mps(golden_model(), dir / "missing" / "x.mps"));
}

TEST_CASE("malformed input is reported") {
  CHECK_THROWS_AS(mps_from_string("NAME x\nROWS\n N obj\nCOLUMNS\n    x nowhere 1\nENDATA\n"), ParseError);
  CHECK_THROWS_AS(mps_from_string("NAME x\nBOGUS\nENDATA\n"), ParseError);
}

TEST_CASE("parsed model solves like the original") {
  const MipModel m = golden_model();
  const auto a = solve_mip(m);
  const auto b = solve_mip(mps_from_string(to_mps(m)));
  CHECK(a.status == SolveStatus::Optimal);
  CHECK(a.objective == b.objective);
}
}
