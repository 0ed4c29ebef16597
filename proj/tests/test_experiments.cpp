#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "oracles.hpp"
#include "tschwarz/experiments.hpp"

using namespace tschwarz;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("tschwarz-test-" + name);
  fs::remove_all(dir);
  return dir;
}

const FigRightResult& reference_run() {
  static const FigRightResult r = fig_right(ExperimentSpec{});
  return r;
}

}  // namespace

TEST_CASE("experiment spec validation and alpha snapping") {
  ExperimentSpec s;
  CHECK_NOTHROW(s.validate());
  CHECK(effective_alpha(s) == 13.0 / 32.0);
  s.nt = 10;
  CHECK(effective_alpha(s) == doctest::Approx(0.4).epsilon(1e-15));
  s.nt = 32;
  s.variants.clear();
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s = ExperimentSpec{};
  s.params.alpha = 0.001;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s = ExperimentSpec{};
  s.threshold = 0.0;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
}

TEST_CASE("fig-left grid") {
  const std::vector<double> g = fig_left_grid();
  REQUIRE(g.size() == 401);
  CHECK(g[0] == 0.0);
  CHECK(g[1] == 1e-2);
  CHECK(g.back() == 1e4);
  for (std::size_t i = 1; i < g.size(); ++i) CHECK(g[i] > g[i - 1]);
}

TEST_CASE("fig-left curves") {
  const auto tables = fig_left(ExperimentSpec{});
  REQUIRE(tables.size() == 10);
  for (const NamedTable& t : tables) {
    if (t.curve == "SD2" || t.curve == "SN2")
      for (const RhoRow& r : t.table.rows)
        if (r.d >= 1.0) CHECK(r.rho > 1.0);
    if (t.curve == "SD3" || t.curve == "SD4" || t.curve == "SN3" || t.curve == "SN4")
      for (const RhoRow& r : t.table.rows) CHECK(r.rho == 1.0);
    if (t.curve == "SD1") {
      const RhoTable single = sweep(Variant::SD1, std::vector<double>{1e3}, kReferenceParams);
      CHECK(std::abs(single.rows[0].rho - 2.5e-6) <= 0.01 * 2.5e-6);
    }
    if (t.curve == "SD1_relaxed") {
      REQUIRE(t.table.theta.has_value());
      CHECK(std::abs(*t.table.theta - 0.692) <= 5e-4);
    }
  }
}

TEST_CASE("fig-left writes one CSV per curve and a manifest") {
  ExperimentSpec s;
  s.output_dir = scratch("left");
  fig_left(s);
  const fs::path dir = s.output_dir / "fig-left";
  for (const char* c : {"SD1", "SD2", "SD3", "SD4", "SN1", "SN2", "SN3", "SN4", "SD1_relaxed",
                        "SN1_relaxed"})
    CHECK(fs::exists(dir / (std::string(c) + ".csv")));
  const auto m = nlohmann::json::parse(slurp(dir / "manifest.json"));
  for (const char* key : {"params", "seed", "threshold", "versions"}) CHECK(m.contains(key));
  CHECK(m["params"]["nu"] == 0.1);
  fs::remove_all(s.output_dir);
}

TEST_CASE("fig-right on the reference problem") {
  const FigRightResult& r = reference_run();
  CHECK(std::abs(r.spectrum.front() - 9.86) <= 0.01);
  CHECK(r.alpha == 13.0 / 32.0);
  REQUIRE(r.runs.size() == 10);
  CHECK_FALSE(r.run("SD1").report.diverged);
  CHECK_FALSE(r.run("SN1").report.diverged);
  CHECK(r.run("SD2").report.diverged);
  CHECK(r.run("SN2").report.diverged);
  CHECK(r.run("SD3").report.iterations_used() == 16);
  for (const char* v : {"SD1", "SN1"}) {
    const auto plain = iterations_to_reach(r.run(v).report, 1e-6);
    const auto relaxed = iterations_to_reach(r.run(std::string(v) + "_theta0.975").report, 1e-6);
    REQUIRE(plain);
    REQUIRE(relaxed);
    CHECK(*relaxed < *plain);
  }
  REQUIRE(r.calibrated_threshold.has_value());
  CHECK(*iterations_to_reach(r.run("SD1").report, *r.calibrated_threshold) == 10);
  CHECK(*iterations_to_reach(r.run("SD1_theta0.975").report, *r.calibrated_threshold) == 6);
  CHECK_THROWS_AS(r.run("nope"), std::out_of_range);
}

TEST_CASE("fig-right output is deterministic") {
  ExperimentSpec s;
  s.variants = {Variant::SD1, Variant::SD3};
  s.iterations = 6;
  s.zero_init = false;
  s.output_dir = scratch("right-a");
  fig_right(s);
  const fs::path a = s.output_dir;
  s.output_dir = scratch("right-b");
  fig_right(s);
  const fs::path b = s.output_dir;
  for (const char* f : {"SD1.csv", "SD3.csv", "SD1_theta0.975.csv", "summary.csv", "manifest.json"}) {
    CAPTURE(f);
    REQUIRE(fs::exists(a / "fig-right" / f));
    CHECK(slurp(a / "fig-right" / f) == slurp(b / "fig-right" / f));
  }
  CHECK(slurp(a / "fig-right" / "SD1.csv").rfind("iter,error,payload_norm_I1,payload_norm_I2\n", 0) == 0);
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("theta policies") {
  ExperimentSpec s;
  s.variants = {Variant::SD1};
  s.iterations = 4;
  s.theta_policy = ThetaPolicy::None;
  CHECK(fig_right(s).runs.size() == 1);
  s.theta_policy = ThetaPolicy::Optimal;
  const FigRightResult r = fig_right(s);
  REQUIRE(r.runs.size() == 2);
  CHECK(std::abs(r.runs[1].report.theta - 0.692) <= 5e-4);
}

TEST_CASE("iterations_to_reach") {
  SchwarzReport r{Variant::SD1, 1.0, SweepOrder::Sequential, 0.5, {}, false, false, 2.0, 1e-6};
  for (std::size_t k = 1; k <= 4; ++k) r.iterations.push_back({k, 2.0 * std::pow(0.5, k - 1), {}, {}});
  CHECK(*iterations_to_reach(r, 0.25) == 3);
  CHECK(*iterations_to_reach(r, 1.0) == 1);
  CHECK_FALSE(iterations_to_reach(r, 1e-4).has_value());
}

TEST_CASE("theorem sweeps") {
  const PropertyReport rep = theorem_sweeps(kDefaultSeed, 200);
  CHECK(rep.passed());
  std::size_t informational = 0;
  for (const PropertyCheck& c : rep.checks) {
    if (c.informational) {
      ++informational;
      CHECK(c.violations > 0);
      CHECK_FALSE(c.violating.empty());
      continue;
    }
    CHECK(c.violations == 0);
  }
  CHECK(informational == 1);
  CHECK(rep.checks[0].samples == 200);
  CHECK(rep.checks[2].samples == 50);
  CHECK(rep.to_text().find("INFO") != std::string::npos);
  CHECK_THROWS_AS(theorem_sweeps(1, 0), std::invalid_argument);
  CHECK(theorem_sweeps(5, 10).to_text() == theorem_sweeps(5, 10).to_text());
}

TEST_CASE("closed-form scalar solution against shooting") {
  const oracle::Shooting sh{2.0, 0.1, 1.0, 1.0, 1.0, 1.0, 200000};
  const std::vector<double> times{0.0, 0.25, 0.5, 0.75, 1.0};
  const auto ref = sh.solve(times);
  for (std::size_t i = 0; i < times.size(); ++i) {
    const ScalarExact e = scalar_exact(2.0, 0.1, 1.0, 1.0, 1.0, 1.0, times[i]);
    CHECK(e.y == doctest::Approx(ref[i][0]).epsilon(1e-9));
    CHECK(e.lambda == doctest::Approx(ref[i][1]).epsilon(1e-9));
  }
}

TEST_CASE("Crank-Nicolson refinement") {
  const std::vector<double> e = cn_refinement_errors(16, 4);
  REQUIRE(e.size() == 4);
  for (std::size_t k = 1; k < 4; ++k) {
    CHECK(e[k - 1] / e[k] >= 3.7);
    CHECK(e[k - 1] / e[k] <= 4.3);
  }
}

TEST_CASE("full validation suite passes") {
  const PropertyReport rep = validate_all();
  INFO(rep.to_text());
  CHECK(rep.passed());
}
