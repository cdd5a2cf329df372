#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "qjcm/commands.hpp"
#include "qjcm/errors.hpp"
#include "qjcm/scenario.hpp"

using namespace qjcm;

namespace {

Scenario load(const std::string& name) {
  std::ifstream in(std::string(QJCM_SCENARIO_DIR) + "/" + name);
  REQUIRE(in);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_scenario(text.str());
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::string value_of(const std::string& report, const std::string& key) {
  for (const auto& line : lines_of(report)) {
    if (line.rfind(key + "=", 0) == 0) return line.substr(key.size() + 1);
  }
  return {};
}

}  // namespace

TEST_CASE("minimal document") {
  const auto s = parse_scenario("kind = standard\ng = 0.1\nm = 2\nz_sq = 9\ndelta_over_omega = 0\n");
  CHECK(s.kind == DeformationKind::Standard);
  CHECK(s.g == 0.1);
  CHECK(s.m == 2);
  CHECK(s.z_sq == 9.0);
  CHECK(s.n_points == 2000);
  CHECK(s.gt_grid().size() == 2000);
  CHECK(s.gt_grid().back() == 25.0);
  CHECK(s.time_grid()[1] == doctest::Approx(s.gt_grid()[1] / 0.1));
  CHECK(s.params().omega0() == doctest::Approx(2.0));

  // comments, blank lines and padding
  const auto t = parse_scenario("# header\n\n  kind=arik_coon   # trailing\nq = 0.9\ng=0.1\nm=2\nz_sq=5\nomega0=2\n");
  CHECK(t.kind == DeformationKind::ArikCoon);
  CHECK(t.q == 0.9);
  CHECK(t.omega0 == 2.0);
}

TEST_CASE("syntax errors carry a position") {
  auto expect = [](const char* text, std::size_t line, std::size_t column) {
    CAPTURE(text);
    try {
      parse_scenario(text);
      FAIL("no error");
    } catch (const ParseError& e) {
      CHECK(e.line() == line);
      CHECK(e.column() == column);
    }
  };
  expect("kind = standard\nqq = 1\n", 2, 1);
  expect("kind = standard\n  g 0.1\n", 2, 3);
  expect("kind = standard\ng = 0.1\ng = 0.2\n", 3, 1);
  expect("kind = standard\ng = abc\n", 2, 5);
  expect("kind = standard\ng = 1e400\n", 2, 5);
  expect("kind = standard\ng = 0.1x\n", 2, 5);
  expect("kind = nonsense\n", 1, 8);
  expect("m = 65\n", 1, 5);
  expect("m = 2.5\n", 1, 5);
  expect("g =\n", 1, 4);
  expect(" = 3\n", 1, 2);
}

TEST_CASE("semantic errors") {
  const std::string base = "g = 0.1\nm = 2\ndelta_over_omega = 0\n";
  CHECK_THROWS_AS(parse_scenario(base + "kind = penson_solomon\nq = 1.2\nz_sq = 1\n"), ValidationError);
  CHECK_THROWS_AS(parse_scenario(base + "kind = arik_coon\nz_sq = 1\n"), ValidationError);
  CHECK_THROWS_AS(parse_scenario(base + "kind = standard\nq = 0.9\nz_sq = 1\n"), ValidationError);
  CHECK_THROWS_AS(parse_scenario("kind = standard\nm = 2\nz_sq = 1\ndelta_over_omega = 0\n"), ValidationError);
  CHECK_THROWS_AS(parse_scenario("kind = standard\ng = 0.1\nm = 2\nz_sq = 1\n"), ValidationError);
  CHECK_THROWS_AS(parse_scenario(base + "omega0 = 2\nkind = standard\nz_sq = 1\n"), ValidationError);
  CHECK_THROWS_AS(parse_scenario("kind = standard\ng = 0\nm = 2\nz_sq = 1\nomega0 = 2\n"), ValidationError);
  CHECK_THROWS_AS(parse_scenario(base + "kind = standard\nz_sq = 1\nalpha_sq = 1.5\n"), ValidationError);

  try {
    parse_scenario("kind = arik_coon\nq = 0.5\n" + base + "z_sq = 3\n");
    FAIL("no error");
  } catch (const ValidationError& e) {
    const std::string what = e.what();
    CHECK(what.find("line 6") != std::string::npos);
    CHECK(what.find("arik_coon with q=0.5 requires z_sq < 2") != std::string::npos);
  }
}

TEST_CASE("serialization round trip") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    Scenario s;
    s.kind = static_cast<DeformationKind>(trial % 4);
    switch (s.kind) {
      case DeformationKind::ArikCoon: s.q = 0.5 + u(rng); break;
      case DeformationKind::PensonSolomon: s.q = 0.5 + 0.5 * u(rng); break;
      case DeformationKind::Quesne: s.q = 0.5 + u(rng); break;
      default: break;
    }
    s.omega = 0.5 + u(rng);
    if (trial % 3 == 0) s.omega0 = 4 * u(rng) - 2;
    else s.delta_over_omega = 6 * u(rng) - 3;
    s.g = 0.01 + u(rng);
    s.m = 1 + trial % 5;
    s.alpha_sq = u(rng);
    s.phi = 6 * u(rng);
    s.theta = -3 * u(rng);
    s.z_sq = 0.9 * u(rng);
    s.gt_max = 1 + 30 * u(rng);
    s.n_points = 2 + trial;
    s.tail_tol = 1e-14 * (1 + u(rng));
    validate_scenario(s);
    const auto text = serialize_scenario(s);
    CAPTURE(text);
    CHECK(parse_scenario(text) == s);
    CHECK(serialize_scenario(parse_scenario(text)) == text);
  }
  CHECK(format_double(0.1) == "0.1");
  CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("bundled scenarios all parse") {
  std::size_t count = 0;
  for (const auto& entry : std::filesystem::directory_iterator(QJCM_SCENARIO_DIR)) {
    if (entry.path().extension() != ".conf") continue;
    CAPTURE(entry.path().string());
    CHECK_NOTHROW(load(entry.path().filename().string()));
    ++count;
  }
  CHECK(count >= 40);
}

TEST_CASE("dynamics output") {
  const auto s = load("fig2a.conf");
  std::ostringstream a, b;
  CHECK(run_command(Subcommand::Dynamics, s, a, 1) == kExitOk);
  CHECK(run_command(Subcommand::Dynamics, s, b, 4) == kExitOk);
  CHECK(a.str() == b.str());
  const auto rows = lines_of(a.str());
  REQUIRE(rows.size() == 2001);
  CHECK(rows[0] == "gt,sigma3,sigma1,sigma2,F1,F2");
  CHECK(rows[1].rfind("0,", 0) == 0);
  CHECK(std::stod(rows[1].substr(2)) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(rows.back().rfind("25,", 0) == 0);
}

TEST_CASE("spectrum output") {
  std::ostringstream out;
  CHECK(run_command(Subcommand::Spectrum, load("fig1a_q0.8.conf"), out) == kExitOk);
  const auto rows = lines_of(out.str());
  REQUIRE(rows.size() > 1);
  CHECK(rows[0] == "n,delta_over_omega,e_plus_over_omega,e_minus_over_omega");
  CHECK(rows.size() == 1 + 2 * 1201);
  CHECK(rows[1].rfind("1,-6,", 0) == 0);
}

TEST_CASE("analyze output") {
  std::ostringstream out;
  CHECK(run_command(Subcommand::Analyze, load("fig3a_critical.conf"), out) == kExitOk);
  const auto text = out.str();
  CHECK(std::abs(std::stod(value_of(text, "delta_c_over_omega")) - -2.1737) < 5e-4);
  CHECK(std::stod(value_of(text, "n_bar")) == doctest::Approx(7.0963).epsilon(1e-4));
  for (const char* key : {"delta_n", "t_r_diff", "t_r_deriv", "t_c", "omega2", "regularity_residual"}) {
    CHECK_FALSE(value_of(text, key).empty());
  }
  std::ostringstream standard;
  run_command(Subcommand::Analyze, load("fig2a.conf"), standard);
  CHECK(value_of(standard.str(), "delta_c_over_omega") == "nan");
}

TEST_CASE("validate and table1") {
  auto s = load("fig2c_q0.9.conf");
  s.n_points = 200;
  std::ostringstream out;
  CHECK(run_command(Subcommand::Validate, s, out, 2) == kExitOk);
  CHECK(std::stod(value_of(out.str(), "max_dev_sigma3")) < 1e-6);

  std::ostringstream table;
  CHECK(run_command(Subcommand::Table1, load("table1.conf"), table) == kExitOk);
  const auto rows = lines_of(table.str());
  REQUIRE(rows.size() == 7);
  CHECK(rows[0] == "row,t_r_diff,t_r_deriv,t_r_ref,t_r_rel_dev,t_c,t_c_ref,t_c_rel_dev");
  CHECK(rows[1].rfind("standard,", 0) == 0);
}

TEST_CASE("distribution output") {
  std::ostringstream out;
  CHECK(run_command(Subcommand::Distribution, load("fig2a.conf"), out) == kExitOk);
  const auto rows = lines_of(out.str());
  CHECK(rows[0] == "n,re_q,im_q,prob");
  CHECK(rows.size() > 30);
}
