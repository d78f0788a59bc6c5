#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "dadcert/certificate.hpp"

namespace fs = std::filesystem;
using dadcert::cli::run;

namespace {

// A scratch copy of the demo corpus, so outputs never land in the source tree.
fs::path scratch() {
  static const fs::path dir = [] {
    const fs::path d = fs::temp_directory_path() / "dadcert_cli_tests";
    fs::remove_all(d);
    fs::copy(DADCERT_DEMO_DIR, d, fs::copy_options::recursive);
    fs::remove_all(d / "out");
    return d;
  }();
  return dir;
}

struct Result {
  int code;
  std::string out, err;
};

Result cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string cfg(const std::string& name) { return (scratch() / name).string(); }

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("cli verify exit codes") {
  CHECK(cli({"verify", cfg("odometer_verify.ini")}).code == 0);
  const auto s0 = cli({"verify", cfg("odometer_verify_s0.ini")});
  CHECK(s0.code == 1);
  CHECK(s0.out.find("counterexample") != std::string::npos);
  CHECK(cli({"verify", cfg("no_such_file.ini")}).code == 2);
  CHECK(cli({"frobnicate"}).code == 2);
  // The verify certificate is valid JSON naming the verdict.
  const auto j = dadcert::json::parse(slurp(scratch() / "out/odometer_verify.json"));
  CHECK(j["verdict"] == "pass");
  CHECK(j["schema_version"] == 1);
}

TEST_CASE("cli build commands") {
  const auto g = cli({"build", cfg("group_cover.ini")});
  CHECK(g.code == 0);
  CHECK(g.out.find("R=7") != std::string::npos);
  CHECK(cli({"build", cfg("gamma_cover.ini")}).code == 0);
  CHECK(cli({"build", cfg("combine.ini")}).code == 0);
  const auto refused = cli({"build", cfg("combine_refused.ini")});
  CHECK(refused.code == 2);
  CHECK(refused.err.find("finite union lemma hypothesis") != std::string::npos);
  CHECK(cli({"build", cfg("odometer_build.ini")}).code == 0);
  // Built covers replay and verify.
  CHECK(cli({"replay", (scratch() / "out/odometer_certificate.json").string()}).code == 0);
  CHECK(cli({"replay", (scratch() / "out/combined_certificate.json").string()}).code == 0);
  CHECK(cli({"--json", "replay", (scratch() / "out/group_certificate.json").string()}).code == 0);
}

TEST_CASE("cli build refuses an infeasible depth") {
  std::ofstream(scratch() / "shallow.ini") << "[system]\nmodel = odometer\np = 2\n[task]\nkind = dad-cover\n"
                                              "colors = 3\ndepth = 10\n[output]\ncover = out/shallow.json\n";
  const auto r = cli({"build", cfg("shallow.ini")});
  CHECK(r.code == 2);
  CHECK(r.err.find("needs depth >= 12") != std::string::npos);
  CHECK_FALSE(fs::exists(scratch() / "out/shallow.json"));
}

TEST_CASE("cli builds are deterministic") {
  for (const char* name : {"odometer_build.ini", "sturmian_build.ini", "combine.ini", "group_cover.ini"}) {
    REQUIRE(cli({"build", cfg(name)}).code == 0);
    const auto cfg_text = slurp(scratch() / name);
    std::vector<std::string> outputs;
    std::istringstream lines(cfg_text);
    for (std::string line; std::getline(lines, line);) {
      const auto eq = line.find("= out/");
      if (eq != std::string::npos) outputs.push_back(line.substr(eq + 2));
    }
    REQUIRE(outputs.size() == 2);
    std::vector<std::string> first;
    for (const auto& o : outputs) first.push_back(slurp(scratch() / o));
    REQUIRE(cli({"build", cfg(name)}).code == 0);
    for (size_t i = 0; i < outputs.size(); ++i) CHECK(slurp(scratch() / outputs[i]) == first[i]);
  }
}

TEST_CASE("cli components reports") {
  const auto r = cli({"components", cfg("components.ini")});
  CHECK(r.code == 0);
  CHECK(r.out.find("0: component 0, labels {0, 1, 2}") != std::string::npos);
  CHECK(r.out.find("2: component 0, labels {-2, -1, 0}") != std::string::npos);
  const auto full = cli({"components", cfg("components_full.ini")});
  CHECK(full.code == 0);
  CHECK(full.out.find("unbounded (wrap)") != std::string::npos);
  const auto empty = cli({"components", cfg("components_empty.ini")});
  CHECK(empty.code == 0);
  CHECK(empty.out.find("0 cells") != std::string::npos);
  CHECK(cli({"--json", "components", cfg("components_sturmian.ini")}).code == 0);
}

TEST_CASE("cli oracle") {
  const auto m = cli({"oracle", cfg("oracle_min_colors.ini")});
  CHECK(m.code == 0);
  CHECK(m.out == "min colors: 2\n");
  const auto a = cli({"oracle", cfg("oracle_agreement.ini")});
  CHECK(a.code == 0);
  CHECK(a.out.find("all agree") != std::string::npos);
  CHECK(cli({"oracle", cfg("oracle_oversize.ini")}).code == 3);
}
