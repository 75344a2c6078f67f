#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const fs::path kWork = fs::path(TEST_WORK_DIR) / "tool";

fs::path fresh(const std::string& name) {
  const auto dir = kWork / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p, std::ios::binary) << text; }

/// Runs the tool with `args`, returns its exit status.
int run(const std::string& args, const fs::path& log) {
  const std::string cmd = std::string("\"") + HYDROWAVE_EXE + "\" " + args + " > \"" + log.string() + "\" 2>&1";
  const int status = std::system(cmd.c_str());
  REQUIRE(WIFEXITED(status));
  return WEXITSTATUS(status);
}

std::size_t lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST_CASE("help and argument errors") {
  const auto dir = fresh("args");
  CHECK(run("--help", dir / "log") == 0);
  CHECK(run("", dir / "log") == 2);
  CHECK(run("nosuchcommand", dir / "log") == 2);
  CHECK(run("trace --steps notanumber", dir / "log") == 2);
}

TEST_CASE("configuration errors exit with code 2") {
  const auto dir = fresh("config");
  write(dir / "bad.json", R"({"geometry": {"h": -1}})");
  CHECK(run("dispersion --config " + (dir / "bad.json").string() + " --out " + dir.string(), dir / "log") == 2);
  write(dir / "unknown.json", R"({"colour": "blue"})");
  CHECK(run("dispersion --config " + (dir / "unknown.json").string(), dir / "log") == 2);
  CHECK(run("dispersion --config " + (dir / "missing.json").string(), dir / "log") == 2);
  CHECK(run("trace --sign sideways --out " + dir.string(), dir / "log") == 2);
  CHECK(run("flow --out " + dir.string(), dir / "log") == 2);
  // Vorticity at the (1,2) resonance makes the mode-1 kernel double.
  CHECK(run("trace --n 1 --gamma 3.6424615104 --steps 1 --out " + dir.string(), dir / "log") == 2);
}

TEST_CASE("dispersion, bifpoints and resonance tables") {
  const auto dir = fresh("tables");
  write(dir / "cfg.json", R"({"dispersion": {"n": [1], "lambda": [0], "gamma": [0]},
                              "bifpoints": {"n_max": 2, "gamma": [0, 1]}, "resonance": {"n_max": 3}})");
  const std::string common = "--config " + (dir / "cfg.json").string() + " --out " + dir.string();
  CHECK(run("dispersion " + common, dir / "log") == 0);
  CHECK(slurp(dir / "dispersion.csv") == "n,lambda,gamma,D\n1,0,0,-3\n");
  CHECK(run("bifpoints " + common, dir / "log") == 0);
  CHECK(lines(slurp(dir / "bifpoints.csv")) == 9);
  CHECK(run("resonance " + common, dir / "log") == 0);
  CHECK(lines(slurp(dir / "resonance.csv")) == 4);
  CHECK(run("check-energy " + common, dir / "log") == 0);
  CHECK(json::parse(slurp(dir / "energy_check.json"))["passed"] == true);
}

TEST_CASE("trace output is deterministic and flags override the file") {
  const auto a = fresh("trace_a");
  const auto b = fresh("trace_b");
  write(a / "cfg.json", R"({"geometry": {"N": 16}, "n": 2, "sign": "-", "gamma": 1.0, "steps": 50, "ds": 0.001})");
  const std::string args = "trace --config " + (a / "cfg.json").string() + " --steps 6 --n 1";
  CHECK(run(args + " --out " + a.string(), a / "log") == 0);
  CHECK(run(args + " --out " + b.string(), b / "log") == 0);
  const auto csv = slurp(a / "branch.csv");
  CHECK(csv == slurp(b / "branch.csv"));
  CHECK(lines(csv) == 7);
  const auto meta = json::parse(slurp(a / "branch.json"));
  CHECK(meta["branch"]["n"] == 1);
  CHECK(meta["branch"]["sign"] == "-");
  CHECK(meta["config"]["steps"] == 6);
  CHECK(meta["config"]["gamma"] == 1.0);
  auto mb = json::parse(slurp(b / "branch.json"));
  auto ma = meta;
  ma.erase("non_canonical");
  mb.erase("non_canonical");
  ma["config"].erase("output");
  mb["config"].erase("output");
  CHECK(ma == mb);
}

TEST_CASE("the echoed configuration reproduces the run") {
  const auto a = fresh("echo_a");
  const auto b = fresh("echo_b");
  CHECK(run("trace --n 1 --gamma 0.5 --steps 3 --out " + a.string(), a / "log") == 0);
  auto cfg = json::parse(slurp(a / "branch.json"))["config"];
  cfg["output"] = b.string();
  write(b / "echo.json", cfg.dump());
  CHECK(run("trace --config " + (b / "echo.json").string(), b / "log") == 0);
  CHECK(slurp(a / "branch.csv") == slurp(b / "branch.csv"));
}

TEST_CASE("trace then flow on a stored branch point") {
  const auto dir = fresh("flow");
  CHECK(run("trace --n 1 --sign + --gamma 1 --steps 20 --ds 0.002 --out " + dir.string(), dir / "log") == 0);
  write(dir / "flow.json", R"({"geometry": {"N": 32}, "n_y": 17})");
  const std::string args = "flow --config " + (dir / "flow.json").string() + " --branch " + (dir / "branch.csv").string() +
                           " --out " + (dir / "field").string();
  CHECK(run(args + " --point 10", dir / "log") == 0);
  const auto meta = json::parse(slurp(dir / "field" / "flow.json"));
  CHECK(meta["status"] == "complete");
  CHECK(meta["source"]["point"] == 10);
  CHECK(meta["diagnostics"]["surface_streamline"].get<double>() <= 1e-8);
  CHECK(meta["diagnostics"]["bernoulli"].get<double>() <= 1e-6);
  // Default grid: the smallest even size strictly above 3N.
  CHECK(meta["geometry"]["M"] == 98);
  CHECK(lines(slurp(dir / "field" / "psi.csv")) == 1 + 17 * 98);
  CHECK(run(args + " --point 99", dir / "log") == 2);
  // The stored branch has N = 32 coefficients; a mismatched geometry is rejected.
  write(dir / "flow16.json", R"({"geometry": {"N": 16}})");
  CHECK(run("flow --config " + (dir / "flow16.json").string() + " --branch " + (dir / "branch.csv").string() +
                " --out " + (dir / "field16").string(),
            dir / "log") == 2);
}

TEST_CASE("wilton with delta outside the window reports not found") {
  const auto dir = fresh("wilton_far");
  CHECK(run("wilton --n 1 --delta 5 --out " + dir.string(), dir / "log") == 0);
  const auto rep = json::parse(slurp(dir / "wilton.json"));
  CHECK(rep["found"] == false);
  CHECK(slurp(dir / "secondary_plus.csv").find('\n') == slurp(dir / "secondary_plus.csv").size() - 1);
  CHECK(lines(slurp(dir / "secondary_minus.csv")) == 1);
  CHECK(run("wilton --n 1 --delta 0 --out " + dir.string(), dir / "log") == 2);
}

TEST_CASE("wilton near the (1,2) resonance") {
  const auto dir = fresh("wilton");
  write(dir / "cfg.json", R"({"geometry": {"N": 16}, "secondary_steps": 4})");
  CHECK(run("wilton --config " + (dir / "cfg.json").string() + " --n 1 --sign + --delta -0.0728 --out " + dir.string(),
            dir / "log") == 0);
  const auto rep = json::parse(slurp(dir / "wilton.json"));
  CHECK(rep["found"] == true);
  CHECK(rep["bifurcation_point"]["amplitude"].get<double>() >= 1e-6);
  CHECK(lines(slurp(dir / "secondary_plus.csv")) == 5);
  CHECK(lines(slurp(dir / "secondary_minus.csv")) == 5);
  const auto meta = json::parse(slurp(dir / "secondary_plus.json"));
  CHECK(meta["branch"]["kind"] == "secondary");
  CHECK(meta["parent"]["branch_id"] == rep["host_branch_id"]);
}
