#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>
#include <unistd.h>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
  int code = -1;
  std::string out, err;
};

fs::path scratch() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / ("rotvec_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path write_config(const std::string& name, const json& j) {
  const auto p = scratch() / (name + ".json");
  std::ofstream(p) << j.dump(2);
  return p;
}

Run rotvec(const std::string& args, const std::string& env = "") {
  const auto out = scratch() / "stdout.txt", err = scratch() / "stderr.txt";
  const std::string cmd = env + " \"" ROTVEC_CLI "\" " + args + " >\"" + out.string() + "\" 2>\"" + err.string() + "\"";
  const int status = std::system(cmd.c_str());
  Run r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

json small_custom() {
  return {{"experiment", "custom"},
          {"space", {{"preset", "standard"}, {"n", 1}}},
          {"family",
           {{"type", "fourier"},
            {"terms", json::array({{{"k", {1, 0}}, {"cos", -0.5}}, {{"k", {0, 1}}, {"cos", 0.1}}})}}},
          {"form", {{"class", {{"dq1", 1.0}}}}},
          {"seeds", {{"grid", "full"}, {"per_dim", 4}}},
          {"search", {{"T0", 10.0}, {"T_max", 20.0}}}};
}

json without_runtime(json report) {
  report.erase("runtime_seconds");
  return report;
}

}  // namespace

TEST_CASE("list names every builtin experiment") {
  const auto r = rotvec("list");
  CHECK(r.code == 0);
  for (const char* s : {"example1-bound", "example1-sharpness", "example3-twisted", "pb-upper", "chord",
                        "nonauto-suspension", "custom", "Example 1", "Example exam-noorb"}) {
    CHECK_MESSAGE(r.out.find(s) != std::string::npos, s);
  }
}

TEST_CASE("validate") {
  CHECK(rotvec("validate \"" + write_config("chord", {{"experiment", "chord"}}).string() + "\"").code == 0);

  const auto empty = rotvec("validate \"" + write_config("empty", json::object()).string() + "\"");
  CHECK(empty.code == 2);
  CHECK(empty.err.find("/experiment") != std::string::npos);

  const auto bogus = rotvec("validate \"" + write_config("bogus", {{"experiment", "chord"}, {"bogus", 1}}).string() + "\"");
  CHECK(bogus.code == 2);
  CHECK(bogus.err.find("/bogus") != std::string::npos);

  json deep = small_custom();
  deep["search"]["T00"] = 1.0;
  const auto nested = rotvec("validate \"" + write_config("deep", deep).string() + "\"");
  CHECK(nested.code == 2);
  CHECK(nested.err.find("/search/T00") != std::string::npos);

  const auto neg = rotvec("validate \"" + write_config("neg", {{"experiment", "chord"}, {"seed", -1}}).string() + "\"");
  CHECK(neg.code == 2);
  CHECK(neg.err.find("/seed") != std::string::npos);

  CHECK(rotvec("validate \"" + (scratch() / "missing.json").string() + "\"").code == 2);
  CHECK(rotvec("frobnicate").code == 2);
}

TEST_CASE("the environment seed overrides the config seed") {
  const auto cfg = write_config("seeded", {{"experiment", "chord"}, {"seed", 5}});
  CHECK(rotvec("validate \"" + cfg.string() + "\"").out.find("seed 5") != std::string::npos);
  const auto r = rotvec("validate \"" + cfg.string() + "\"", "ROTVEC_SEED=42");
  CHECK(r.code == 0);
  CHECK(r.out.find("seed 42") != std::string::npos);
  CHECK(rotvec("validate \"" + cfg.string() + "\"", "ROTVEC_SEED=abc").code == 2);

  const auto out = scratch() / "seeded_out";
  CHECK(rotvec("run \"" + cfg.string() + "\" --out \"" + out.string() + "\"", "ROTVEC_SEED=42").code == 0);
  CHECK(json::parse(slurp(out / "report.json")).at("seed") == 42);
}

TEST_CASE("reports do not depend on the worker count") {
  const auto cfg = write_config("small", small_custom());
  const auto a = scratch() / "jobs1", b = scratch() / "jobs2";
  REQUIRE(rotvec("run \"" + cfg.string() + "\" --jobs 1 --out \"" + a.string() + "\"").code == 0);
  REQUIRE(rotvec("run \"" + cfg.string() + "\" --jobs 2 --out \"" + b.string() + "\"").code == 0);
  CHECK(without_runtime(json::parse(slurp(a / "report.json"))) == without_runtime(json::parse(slurp(b / "report.json"))));
  CHECK(slurp(a / "seeds.csv") == slurp(b / "seeds.csv"));
}

TEST_CASE("exit codes follow the thresholds") {
  const auto out = scratch() / "chord_out";
  const auto ok = rotvec("run \"" + write_config("chord_run", {{"experiment", "chord"}}).string() + "\" --out \"" +
                         out.string() + "\"");
  CHECK(ok.code == 0);
  CHECK(ok.out.find("PASS chord_time") != std::string::npos);
  CHECK(fs::exists(out / "report.json"));
  CHECK(fs::exists(out / "chord.csv"));

  const json failing{{"experiment", "custom"},
                     {"space", {{"preset", "standard"}, {"n", 1}}},
                     {"form", {{"class", {{"dq1", 0.5}}}}},
                     {"X", {{"momentum", {0.0}}}},
                     {"X_prime", {{"momentum", {0.5}}}},
                     {"chord", {{"t_max", 3.0}}},
                     {"thresholds", {{"max_chord_time", 0.5}}}};
  const auto bad = rotvec("run \"" + write_config("failing", failing).string() + "\" --out \"" +
                          (scratch() / "failing_out").string() + "\"");
  CHECK(bad.code == 1);
  CHECK(bad.out.find("FAIL max_chord_time") != std::string::npos);
}
