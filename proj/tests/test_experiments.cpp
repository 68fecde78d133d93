#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "uavharvest/experiments.hpp"

using namespace uavharvest;
namespace fs = std::filesystem;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("figure presets resolve every parameter") {
  const ExperimentSpec f3 = figure_preset(3);
  CHECK(f3.cfg.lambda == doctest::Approx(1e-3));
  CHECK(f3.cfg.mu == 2000.0);
  CHECK(f3.cfg.w == 250.0);
  CHECK(f3.cfg.l == 500.0);
  CHECK(f3.cfg.h == 250.0);
  CHECK(f3.cfg.m == 1);
  CHECK(f3.cfg.omega == 1.0);
  CHECK(f3.sweep2.grid == std::vector<double>{2.5, 3.0, 3.5});
  CHECK(f3.sweep.grid.size() == 20);

  const ExperimentSpec f4 = figure_preset(4);
  CHECK(f4.cfg.alpha == 4.0);
  CHECK(f4.cfg.h == 200.0);
  CHECK(f4.cfg.l == 500.0);
  CHECK(f4.cfg.lambda == doctest::Approx(1e-4));
  CHECK(f4.cfg.mu == 1000.0);
  CHECK(f4.sweep.grid.size() == 8);

  const ExperimentSpec f8 = figure_preset(8);
  CHECK(f8.cfg.mu == 2000.0);
  CHECK(f8.cfg.h == 200.0);
  CHECK(f8.sweep.grid == std::vector<double>{10e-6, 20e-6, 30e-6});

  const ExperimentSpec f9 = figure_preset(9);
  CHECK(f9.cfg.alpha == 3.5);
  CHECK(f9.cfg.v == 30.0);
  CHECK(f9.cfg.lambda == doctest::Approx(1e-3));

  const ExperimentSpec f10 = figure_preset(10);
  CHECK(f10.cfg.mu == 200.0);
  CHECK(f10.cfg.w == 100.0);
  CHECK(f10.cfg.l == 100.0);
  CHECK(f10.cfg.alpha == 2.0);
  CHECK(f10.cfg.p == doctest::Approx(0.199526231496888).epsilon(1e-12));
  CHECK(f10.cfg.noise == doctest::Approx(3.981071705534969e-14).epsilon(1e-12));

  CHECK_THROWS_AS(figure_preset(12), ConfigError);
  CHECK_THROWS_AS(default_experiment("nonsense"), ConfigError);
}

TEST_CASE("experiment CSV bodies are byte-identical across reruns") {
  ExperimentSpec spec = default_experiment("coverage");
  spec.trials = 500;
  spec.sweep.grid = {400.0, 800.0};
  const fs::path dir_a = fresh_dir("uavharvest_test_a");
  const fs::path dir_b = fresh_dir("uavharvest_test_b");
  spec.out_dir = dir_a.string();
  const RunSummary a = run_experiment(spec);
  spec.out_dir = dir_b.string();
  const RunSummary b = run_experiment(spec);
  REQUIRE(a.csv_paths.size() == 1);
  REQUIRE(b.csv_paths.size() == 1);
  CHECK(slurp(a.csv_paths[0]) == slurp(b.csv_paths[0]));
  CHECK(slurp(a.csv_paths[0]).find("coverage_analytic") != std::string::npos);

  // The manifest reproduces the resolved config in SI.
  const std::string manifest = slurp(a.manifest_path);
  CHECK(manifest.find("\"experiment\"") != std::string::npos);
  CHECK(manifest.find(tool_version()) != std::string::npos);
}

TEST_CASE("empty or unsorted sweep grids are rejected") {
  ExperimentSpec spec = default_experiment("coverage");
  spec.sweep.grid.clear();
  CHECK_THROWS_WITH_AS(run_experiment(spec), doctest::Contains("non-empty"),
                       ConfigError);
  spec.sweep.grid = {500.0, 400.0};
  CHECK_THROWS_WITH_AS(run_experiment(spec),
                       doctest::Contains("strictly increasing"), ConfigError);
}

TEST_CASE("verify gate passes on a sane run") {
  ExperimentSpec spec = default_experiment("coverage");
  spec.trials = 2000;
  spec.sweep.grid = {500.0};
  spec.verify = true;
  spec.out_dir = fresh_dir("uavharvest_test_verify").string();
  const RunSummary s = run_experiment(spec);
  CHECK(s.verify_ok);
}

TEST_CASE("verify-all runs the suite over the canonical configs") {
  const fs::path dir = fresh_dir("uavharvest_test_configs");
  {
    std::ofstream a(dir / "ok.json");
    a << R"({"lambda": "200/km^2", "mu": "1 km", "w": "0.4 km",
             "l": "0.5 km", "h": "0.2 km", "v": 10, "alpha": 4,
             "tau": "0 dB"})";
    std::ofstream b(dir / "broken.json");
    b << R"({"lambda": 0, "mu": 10, "w": 1, "l": 1, "h": 1, "v": 1,
             "alpha": 0.5})";
  }
  const fs::path out = fresh_dir("uavharvest_test_verify_out");
  const VerifyReport report = verify_all(dir.string(), out.string(), 400, 1);
  CHECK_FALSE(report.all_pass);  // the corrupted config must fail, not crash
  bool saw_load_failure = false;
  bool saw_ok_pass = false;
  for (const VerifyCheck& c : report.checks) {
    if (c.config_name == "broken" && c.check == "load" && !c.pass) {
      saw_load_failure = true;
    }
    if (c.config_name == "ok" && c.pass) saw_ok_pass = true;
  }
  CHECK(saw_load_failure);
  CHECK(saw_ok_pass);
  CHECK(fs::exists(report.report_path));

  // Byte-identical reruns with the same seed.
  const fs::path out2 = fresh_dir("uavharvest_test_verify_out2");
  const VerifyReport again = verify_all(dir.string(), out2.string(), 400, 1);
  REQUIRE(report.csv_paths.size() == again.csv_paths.size());
  for (std::size_t i = 0; i < report.csv_paths.size(); ++i) {
    CHECK(slurp(report.csv_paths[i]) == slurp(again.csv_paths[i]));
  }
  CHECK_THROWS_AS(verify_all((dir / "nowhere").string(), out.string(), 10, 1),
                  std::exception);
}
