#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string stdout_text;
  std::string stderr_text;
};

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

RunResult run_cli(const std::string& args, const fs::path& dir) {
  const fs::path out_file = dir / "stdout.txt";
  const fs::path err_file = dir / "stderr.txt";
  const std::string cmd = std::string(RGF_CLI_PATH) + " " + args + " > " + out_file.string() +
                          " 2> " + err_file.string();
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.stdout_text = slurp(out_file);
  r.stderr_text = slurp(err_file);
  return r;
}

fs::path make_work_dir(const char* name) {
  const fs::path dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("generate writes a byte-identical scene for a fixed seed") {
  const fs::path dir = make_work_dir("rgf_cli_gen");
  const std::string a = (dir / "a.json").string();
  const std::string b = (dir / "b.json").string();

  auto r1 = run_cli("generate --frames 10 --seed 5 --out " + a, dir);
  REQUIRE(r1.exit_code == 0);
  CHECK(r1.stdout_text.find("wrote 10 frames") != std::string::npos);

  auto r2 = run_cli("generate --frames 10 --seed 5 --out " + b, dir);
  REQUIRE(r2.exit_code == 0);
  CHECK(slurp(a) == slurp(b));
  CHECK_FALSE(slurp(a).empty());

  // A different seed gives a different scene file.
  auto r3 = run_cli("generate --frames 10 --seed 6 --out " + b, dir);
  REQUIRE(r3.exit_code == 0);
  CHECK(slurp(a) != slurp(b));
}

TEST_CASE("generate rejects an invalid config with exit code 1") {
  const fs::path dir = make_work_dir("rgf_cli_badcfg");
  const fs::path cfg = dir / "config.json";
  {
    std::ofstream f(cfg);
    f << R"({"class_mix": {"car": 0.9, "truck": 0.9}})";
  }
  const auto r = run_cli("generate --config " + cfg.string() + " --out " +
                             (dir / "scene.json").string(),
                         dir);
  CHECK(r.exit_code == 1);
  CHECK(r.stderr_text.find("class_mix") != std::string::npos);
}

TEST_CASE("evaluate produces reports and a summary line") {
  const fs::path dir = make_work_dir("rgf_cli_eval");
  const std::string scene = (dir / "scene.json").string();
  REQUIRE(run_cli("generate --frames 15 --seed 3 --out " + scene, dir).exit_code == 0);

  const std::string out_dir = (dir / "out").string();
  const auto r = run_cli("evaluate --scene " + scene + " --out " + out_dir, dir);
  REQUIRE(r.exit_code == 0);
  CHECK(r.stdout_text.find("Rcll") != std::string::npos);
  CHECK(fs::exists(fs::path(out_dir) / "metrics.json"));
  CHECK(fs::exists(fs::path(out_dir) / "per_frame.csv"));
  CHECK(fs::exists(fs::path(out_dir) / "cost.csv"));

  const std::string metrics = slurp(fs::path(out_dir) / "metrics.json");
  CHECK(metrics.find("\"recall\"") != std::string::npos);
  CHECK(metrics.find("\"mean_gflops\"") != std::string::npos);

  // Re-running with identical arguments reproduces the outputs byte for byte.
  const std::string out2 = (dir / "out2").string();
  REQUIRE(run_cli("evaluate --scene " + scene + " --out " + out2, dir).exit_code == 0);
  CHECK(slurp(fs::path(out_dir) / "metrics.json") == slurp(fs::path(out2) / "metrics.json"));
  CHECK(slurp(fs::path(out_dir) / "per_frame.csv") == slurp(fs::path(out2) / "per_frame.csv"));
  CHECK(slurp(fs::path(out_dir) / "cost.csv") == slurp(fs::path(out2) / "cost.csv"));
}

TEST_CASE("evaluate fails cleanly on a missing scene file") {
  const fs::path dir = make_work_dir("rgf_cli_missing");
  const auto r = run_cli("evaluate --scene " + (dir / "nope.json").string(), dir);
  CHECK(r.exit_code == 1);
  CHECK_FALSE(r.stderr_text.empty());
}

TEST_CASE("evaluate fails cleanly on a malformed scene file") {
  const fs::path dir = make_work_dir("rgf_cli_malformed");
  const fs::path scene = dir / "scene.json";
  {
    std::ofstream f(scene);
    f << R"({"camera": {}, "frames": []})";
  }
  const auto r = run_cli("evaluate --scene " + scene.string(), dir);
  CHECK(r.exit_code == 1);
  CHECK(r.stderr_text.find("intrinsics") != std::string::npos);
}

TEST_CASE("sweep writes a csv over the requested values") {
  const fs::path dir = make_work_dir("rgf_cli_sweep");
  const std::string scene = (dir / "scene.json").string();
  REQUIRE(run_cli("generate --frames 8 --seed 2 --out " + scene, dir).exit_code == 0);

  const std::string out_dir = (dir / "out").string();
  const auto r = run_cli("sweep --scene " + scene + " --values 80,240 --out " + out_dir, dir);
  REQUIRE(r.exit_code == 0);
  const std::string csv = slurp(fs::path(out_dir) / "sweep.csv");
  CHECK(csv.rfind("value,recall,mean_gflops\n", 0) == 0);
  CHECK(csv.find("\n80,") != std::string::npos);
  CHECK(csv.find("\n240,") != std::string::npos);
  CHECK(r.stdout_text == csv);
}

TEST_CASE("unknown arguments exit with code 1") {
  const fs::path dir = make_work_dir("rgf_cli_badargs");
  CHECK(run_cli("evaluate --scene x --bogus-flag", dir).exit_code == 1);
  CHECK(run_cli("", dir).exit_code == 1);
}
