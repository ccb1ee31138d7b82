// Drives the installed binary end to end: exit-code contract, CSV shapes,
// determinism of rerun outputs.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "weylvd/experiments.hpp"
#include "weylvd/potential.hpp"

namespace fs = std::filesystem;

namespace {

const std::string kBin = WEYLVD_BIN_PATH;

fs::path work_dir() {
  const auto dir = fs::temp_directory_path() / "weylvd_cli_test";
  fs::create_directories(dir);
  return dir;
}

int run(const std::string& args) {
  const std::string cmd = "'" + kBin + "' " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("m-function evaluation against the free branch value") {
  const auto dir = work_dir();
  const auto pot = dir / "zero.csv";
  weylvd::write_potential_csv(weylvd::PotentialSpec::zero(10.0, 0.5), pot.string());
  const auto out = dir / "m.csv";

  CHECK(run("mfunction --potential '" + pot.string() + "' --z 0,1 --out '" +
            out.string() + "'") == 0);
  const std::string csv = slurp(out);
  CHECK(csv.rfind("re_z,im_z,re_m,im_m,gamma_diag\n", 0) == 0);
  double re_z, im_z, re_m, im_m, diag;
  std::sscanf(csv.c_str() + csv.find('\n') + 1, "%lf,%lf,%lf,%lf,%lf", &re_z, &im_z,
              &re_m, &im_m, &diag);
  // i sqrt(i) = (-1 + i)/sqrt 2
  CHECK(re_m == doctest::Approx(-1.0 / std::sqrt(2.0)).epsilon(1e-6));
  CHECK(im_m == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-6));
  CHECK(diag < 1e-8);
}

TEST_CASE("missing potential file exits 1") {
  CHECK(run("mfunction --potential /does/not/exist.csv --z 0,1") == 1);
}

TEST_CASE("tail too short for the tolerance exits 2") {
  const auto dir = work_dir();
  const auto pot = dir / "farbump.csv";
  weylvd::write_potential_csv(
      weylvd::PotentialSpec::sample(
          [](double x) { return (x >= 12.0 && x < 13.0) ? 5.0 : 0.0; }, 30.0, 0.25,
          weylvd::Interpolation::piecewise_constant),
      pot.string());
  CHECK(run("mfunction --potential '" + pot.string() +
            "' --z 0,1 --tail 10 --tol 1e-9") == 2);
}

TEST_CASE("bound suite: success path and deterministic rerun") {
  const auto dir = work_dir();
  const auto out1 = dir / "bounds1.csv";
  const auto out2 = dir / "bounds2.csv";
  CHECK(run("bounds --check lemma3 --draws 25 --seed 42 --out '" + out1.string() +
            "'") == 0);
  CHECK(run("bounds --check lemma3 --draws 25 --seed 42 --out '" + out2.string() +
            "'") == 0);
  const std::string csv1 = slurp(out1);
  CHECK(csv1 == slurp(out2));
  CHECK(csv1.rfind("check,seed,lhs,rhs,margin,pass\n", 0) == 0);
}

TEST_CASE("contrived tolerance demonstrates the violation exit") {
  // requiring lhs <= rhs/2 is stronger than the proved inequalities
  CHECK(run("bounds --check lemma3 --draws 25 --seed 42 --tol-rel -0.5") == 3);
}

TEST_CASE("unknown check name exits 1") {
  CHECK(run("bounds --check lemma9") == 1);
}

TEST_CASE("sparse experiment: outputs, manifest, deterministic csv") {
  const auto dir = work_dir();
  const auto cfg = dir / "small.cfg";
  {
    std::ofstream out(cfg);
    out << "[potential]\nsource = bump_train\nheight = 1.5\nwidth = 1\ngrowth = 2\n"
        << "count = 3\n[sets]\na = [1,2]\ns = (0,inf)\n[run]\nd_ladder = 0.1,0.01\n";
  }
  const auto run1 = dir / "run1";
  const auto run2 = dir / "run2";
  CHECK(run("sparse-experiment --config '" + cfg.string() + "' --outdir '" +
            run1.string() + "' --plot") == 0);
  CHECK(run("sparse-experiment --config '" + cfg.string() + "' --outdir '" +
            run2.string() + "'") == 0);

  CHECK(fs::exists(run1 / "theorem2.csv"));
  CHECK(fs::exists(run1 / "corollary2.csv"));
  CHECK(fs::exists(run1 / "manifest.json"));
  CHECK(fs::exists(run1 / "discrepancy.svg"));
  CHECK(slurp(run1 / "theorem2.csv") == slurp(run2 / "theorem2.csv"));
  CHECK(slurp(run1 / "corollary2.csv") == slurp(run2 / "corollary2.csv"));
  CHECK(slurp(run1 / "manifest.json").find("config_digest") != std::string::npos);
}

TEST_CASE("config errors map to exit 1, degenerate windows to exit 4") {
  const auto dir = work_dir();
  const auto bad = dir / "bad.cfg";
  {
    std::ofstream out(bad);
    out << "[potential]\nsource = unknown_generator\n";
  }
  CHECK(run("sparse-experiment --config '" + bad.string() + "'") == 1);
  CHECK(run("sparse-experiment --config '" + (dir / "absent.cfg").string() + "'") == 1);

  // a potential with no admissible window at all
  const auto pot = dir / "dense.csv";
  weylvd::write_potential_csv(
      weylvd::PotentialSpec::sample([](double) { return 1.0; }, 60.0, 0.5,
                                    weylvd::Interpolation::piecewise_constant),
      pot.string());
  const auto scan_cfg = dir / "scan.cfg";
  {
    std::ofstream out(scan_cfg);
    out << "[potential]\nsource = file\npath = " << pot.string()
        << "\nscan_window_length = 5\nscan_delta = 1e-4\n";
  }
  CHECK(run("sparse-experiment --config '" + scan_cfg.string() + "'") == 4);
}

TEST_CASE("shipped config parses and the windows are admissible") {
  const std::string shipped = std::string(WEYLVD_CONFIG_DIR) + "/bump_train.cfg";
  const auto cfg = weylvd::parse_experiment_config(shipped);
  CHECK(cfg.windows.size() == 6);
  CHECK(cfg.potential.x_max() <= 2000.0);
  CHECK(cfg.windows.masses_non_increasing(cfg.potential));
  CHECK(cfg.a_set.measure() == doctest::Approx(1.0));
}
