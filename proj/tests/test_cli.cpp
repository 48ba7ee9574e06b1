#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cli.hpp"

using tropos::cli::run;
using Json = nlohmann::ordered_json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "tropos");
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path scratch(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / ("tropos_test_" + name);
  std::ofstream(path) << content;
  return path;
}

std::size_t count_lines(const std::string& s) {
  std::size_t n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

}  // namespace

TEST_CASE("selftests pass for every subcommand") {
  for (const char* sub : {"pwa", "newton", "jensen", "apseq", "lift", "jessen", "weil", "witt"}) {
    CAPTURE(sub);
    const auto r = invoke({sub, "--selftest"});
    CHECK(r.code == 0);
    CHECK(r.out.find("FAIL") == std::string::npos);
    CHECK(r.out.find("ok") != std::string::npos);
  }
}

TEST_CASE("exit codes") {
  CHECK(invoke({}).code == tropos::cli::kExitUsage);
  CHECK(invoke({"frobnicate"}).code == tropos::cli::kExitUsage);
  CHECK(invoke({"apseq", "--check", "nonsense"}).code == tropos::cli::kExitUsage);
  CHECK(invoke({"--help"}).code == 0);
  CHECK(invoke({"pwa"}).code == tropos::cli::kExitPrecondition);
  const auto bad = scratch("bad.json", R"({"domain":["-inf","inf"],"breakpoints":["1","0"],"slopes":[0,1,2],"anchor":["0","0"]})");
  CHECK(invoke({"pwa", "--in", bad.string()}).code == tropos::cli::kExitPrecondition);
  CHECK(invoke({"weil", "--zeros", "/nonexistent/zeros.txt"}).code == tropos::cli::kExitPrecondition);
  const auto unsorted = scratch("unsorted.txt", "21.0\n14.1\n");
  const auto r = invoke({"weil", "--zeros", unsorted.string()});
  CHECK(r.code == tropos::cli::kExitPrecondition);
  CHECK(r.err.find(":2:") != std::string::npos);
  CHECK(invoke({"lift", "--K", "0"}).code == tropos::cli::kExitPrecondition);
  CHECK(invoke({"jessen", "--sum", "1,-1@log2", "--T", "10"}).code == tropos::cli::kExitPrecondition);
  CHECK(invoke({"witt", "--grid", "3x3", "--check", "residual"}).code == tropos::cli::kExitPrecondition);
}

TEST_CASE("lift rows") {
  const auto r = invoke({"lift", "--K", "100"});
  REQUIRE(r.code == 0);
  std::istringstream in(r.out);
  std::string meta, header;
  std::getline(in, meta);
  std::getline(in, header);
  CHECK(meta.rfind("# ", 0) == 0);
  CHECK(header == "k,sign,position");
  CHECK(count_lines(r.out) == 2 + 2 * 201);
}

TEST_CASE("pwa round trip and rr") {
  const auto f = scratch("f.json",
                         R"({"domain":["-inf","inf"],"breakpoints":["0","1"],"slopes":["0","1","3"],"anchor":["0","0"]})");
  auto r = invoke({"pwa", "--in", f.string(), "--scale", "2"});
  REQUIRE(r.code == 0);
  auto j = Json::parse(r.out);
  CHECK(j["laplacian"]["atoms"].size() == 2);
  CHECK(j["function"]["breakpoints"][1] == "1/2");
  CHECK(j["meta"]["subcommand"] == "pwa");
  const auto d = scratch("d.json", R"({"atoms":[["0","-2"],["1","1"],["3","-1"]]})");
  r = invoke({"pwa", "--rr", d.string()});
  REQUIRE(r.code == 0);
  j = Json::parse(r.out);
  CHECK(j["effective"] == true);
  CHECK(j["integral_slopes"] == true);
}

TEST_CASE("weil explicit output") {
  const auto r = invoke({"weil", "--zeros", "zeros_sample100.txt", "--f", "bump:2.1,2.9"});
  REQUIRE(r.code == 0);
  const auto j = Json::parse(r.out);
  for (const char* key : {"prime_side", "zero_side", "residual", "relative_residual", "zeros_used"})
    CHECK(j.contains(key));
  CHECK(j["zeros_used"] == 100);
  CHECK(j["meta"]["inputs"].size() == 1);
  const auto o = Json::parse(invoke({"weil", "--check", "omega"}).out);
  CHECK(o["omega_at_one"].get<double>() == doctest::Approx(0.5 + 0.5772156649015329 / 2 + std::log(4 * M_PI) / 2 +
                                                          12 * -0.165421143700450929213919660243));
}

TEST_CASE("reproducible output and --out") {
  const std::vector<std::string> args{"jessen", "--sum", "1,-1@log2", "--T", "200", "--seed", "3"};
  const auto a = invoke(args), b = invoke(args);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  const auto path = std::filesystem::temp_directory_path() / "tropos_test_out.json";
  auto with_out = args;
  with_out.insert(with_out.begin(), {"--out", path.string()});
  REQUIRE(invoke(with_out).code == 0);
  std::ifstream in(path);
  const auto j = Json::parse(in);
  CHECK(j["zeros"] == Json::parse(a.out)["zeros"]);
  CHECK(j["meta"]["parameters"]["seed"] == "3");
}
