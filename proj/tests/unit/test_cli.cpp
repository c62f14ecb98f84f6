#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"
#include "pmech/io.hpp"

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "pmech");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  const int code = pmech::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "pmech_cli_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream is(p);
  return {std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("brackets prints Poisson and Moyal brackets") {
  const auto r = run({"brackets", "--f", "q^3", "--g", "p^3"});
  CHECK(r.code == 0);
  CHECK(r.out.find("poisson: 9*q^2*p^2") != std::string::npos);
  CHECK(r.out.find("9*q^2*p^2 - 6*h^2") != std::string::npos);
}

TEST_CASE("usage errors exit with 2") {
  CHECK(run({}).code == 2);
  CHECK(run({"brackets", "--f", "q^", "--g", "p"}).code == 2);
  CHECK(run({"brackets", "--f", "q"}).code == 2);
  CHECK(run({"oscillator", "--mode", "moyal", "--hamiltonian", "p^2/2 + q^4/4"}).code == 2);
  CHECK(run({"fock", "--grid", "1,2"}).code == 2);
  CHECK(run({"kleingordon", "--lattice", "12by4"}).code == 2);
  CHECK(run({"verify", "--suite", "nonsense"}).code == 2);
  const auto r = run({"oscillator", "--mode", "moyal", "--hamiltonian", "p^2/2 + q^4/4"});
  CHECK(r.err.find("truncation") != std::string::npos);
}

TEST_CASE("help exits with 0") {
  const auto r = run({"--help"});
  CHECK(r.code == 0);
  CHECK(r.out.find("kleingordon") != std::string::npos);
}

TEST_CASE("failed checks exit with 1") {
  CHECK(run({"kleingordon", "--k", "1", "--dispersion-tol", "1e-9"}).code == 1);
  const auto ok = run({"fock", "--state", "vacuum"});
  CHECK(ok.code == 0);
  CHECK(ok.out.find("in Fock space: yes") != std::string::npos);
}

TEST_CASE("I/O failures exit with 3") {
  CHECK(run({"brackets", "--f", "q", "--g", "p", "--json", "/nonexistent-dir/out.json"}).code == 3);
}

TEST_CASE("JSON report carries the envelope") {
  const auto path = scratch("brackets.json");
  REQUIRE(run({"brackets", "--f", "q^2", "--g", "p^2", "--json", path.string()}).code == 0);
  const auto j = nlohmann::json::parse(slurp(path));
  CHECK(j["schema_version"] == pmech::io::kSchemaVersion);
  CHECK(j["command"] == "brackets");
  CHECK(j["config"]["f"] == "q^2");
}

TEST_CASE("CSV goes to stdout with '-'") {
  const auto r = run({"oscillator", "--t-end", "1", "--dt", "0.1", "--csv", "-"});
  REQUIRE(r.code == 0);
  const auto rows = pmech::io::parse_csv(r.out.substr(r.out.find("t,")));
  CHECK(rows.size() >= 3);
  CHECK(rows[0][0] == "t");
}

TEST_CASE("configuration files feed subcommand options") {
  const auto cfg = scratch("run.toml");
  {
    std::ofstream os(cfg);
    os << "[brackets]\nf = \"q^3\"\ng = \"p^3\"\n";
  }
  const auto r = run({"--config", cfg.string(), "brackets"});
  CHECK(r.code == 0);
  CHECK(r.out.find("poisson: 9*q^2*p^2") != std::string::npos);
  const auto flag = run({"--config", cfg.string(), "brackets", "--g", "p"});
  CHECK(flag.out.find("poisson: 3*q^2") != std::string::npos);

  const auto bad = scratch("bad.toml");
  {
    std::ofstream os(bad);
    os << "[brackets]\nf = \"q\"\ng = \"p\"\ncolour = 3\n";
  }
  CHECK(run({"--config", bad.string(), "brackets"}).code == 2);
}

TEST_CASE("thread count from the environment is validated") {
  setenv("PMECH_THREADS", "many", 1);
  CHECK(run({"brackets", "--f", "q", "--g", "p"}).code == 2);
  setenv("PMECH_THREADS", "2", 1);
  CHECK(run({"brackets", "--f", "q", "--g", "p"}).code == 0);
  unsetenv("PMECH_THREADS");
  CHECK(run({"--threads", "1", "brackets", "--f", "q", "--g", "p"}).code == 0);
}
