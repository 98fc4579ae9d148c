#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

struct Result {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class TempDir {
 public:
  TempDir() {
    std::string tmpl = (fs::temp_directory_path() / "asuq-cli-XXXXXX").string();
    path_ = ::mkdtemp(tmpl.data());
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }
  fs::path operator/(const std::string& name) const { return path_ / name; }

 private:
  fs::path path_;
};

Result cli(const TempDir& dir, const std::string& args, const std::string& env = "") {
  const auto out = dir / ".stdout", err = dir / ".stderr";
  const std::string cmd = "cd '" + dir.path().string() + "' && " + env + " '" + ASUQ_CLI + "' " + args + " >'" +
                          out.string() + "' 2>'" + err.string() + "'";
  const int status = std::system(cmd.c_str());
  Result r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

ordered_json read_json(const fs::path& p) { return ordered_json::parse(slurp(p)); }

std::size_t count_status(const ordered_json& campaign, const std::string& status) {
  std::size_t n = 0;
  for (const auto& r : campaign["runs"]) n += r["status"] == status;
  return n;
}

}  // namespace

TEST_CASE("sample writes M pending runs deterministically") {
  TempDir dir;
  REQUIRE(cli(dir, "sample -M 50 --seed 7 -o a.json").code == 0);
  REQUIRE(cli(dir, "sample -M 50 --seed 7 -o b.json").code == 0);
  const auto a = read_json(dir / "a.json");
  CHECK(a["runs"].size() == 50);
  CHECK(a["space"].size() == 7);
  CHECK(count_status(a, "pending") == 50);
  CHECK(slurp(dir / "a.json") == slurp(dir / "b.json"));

  REQUIRE(cli(dir, "sample -M 50 --seed 8 -o c.json").code == 0);
  CHECK(slurp(dir / "a.json") != slurp(dir / "c.json"));
}

TEST_CASE("usage errors exit 1") {
  TempDir dir;
  CHECK(cli(dir, "sample -M 0 --seed 1 -o x.json").code == 1);
  CHECK(cli(dir, "sample -M 10 -o x.json").code == 1);  // no seed
  CHECK(cli(dir, "frobnicate").code == 1);
  REQUIRE(cli(dir, "sample -M 10 --seed 1 -o c.json").code == 0);
  CHECK(cli(dir, "analyze --campaign c.json").code == 1);  // no seed
  const auto missing = cli(dir, "run --campaign c.json --command /no/such/solver");
  CHECK(missing.code == 1);
  CHECK(count_status(read_json(dir / "c.json"), "pending") == 10);
  CHECK(cli(dir, "run --campaign c.json --evaluator ridge:sinusoid --wtrue-seed 1").code == 1);
}

TEST_CASE("data errors exit 2") {
  TempDir dir;
  std::ofstream(dir / "bad.json") << R"([{"name":"a","min":1,"nominal":0,"max":2}])";
  CHECK(cli(dir, "space validate bad.json").code == 2);
  CHECK(cli(dir, "space validate").code == 0);
  std::ofstream(dir / "broken.json") << "{ not json";
  CHECK(cli(dir, "run --campaign broken.json --evaluator ridge:linear --wtrue-seed 1").code == 2);
}

TEST_CASE("run with the built-in ridge, then resume") {
  TempDir dir;
  REQUIRE(cli(dir, "sample -M 20 --seed 3 -o c.json").code == 0);
  const auto r = cli(dir, "run --campaign c.json --evaluator ridge:linear --wtrue-seed 3");
  CHECK(r.code == 0);
  const auto done = read_json(dir / "c.json");
  CHECK(count_status(done, "done") == 20);
  const auto before = slurp(dir / "c.json");
  CHECK(cli(dir, "run --campaign c.json --evaluator ridge:linear --wtrue-seed 3").code == 0);
  CHECK(slurp(dir / "c.json") == before);
}

TEST_CASE("partial failure exits 4 and retry recovers") {
  TempDir dir;
  REQUIRE(cli(dir, "sample -M 6 --seed 2 -o c.json").code == 0);
  const std::string solver = std::string("--command '") + FAKE_SOLVER + " --fail-index 2'";
  const auto r = cli(dir, "run --campaign c.json " + solver);
  CHECK(r.code == 4);
  const auto c = read_json(dir / "c.json");
  CHECK(count_status(c, "done") == 5);
  CHECK(count_status(c, "failed") == 1);
  CHECK(c["runs"][2]["error"].get<std::string>().find("diverged") != std::string::npos);

  const auto again = cli(dir, std::string("run --campaign c.json --retry-failed --command '") + FAKE_SOLVER + "'");
  CHECK(again.code == 0);
  CHECK(count_status(read_json(dir / "c.json"), "done") == 6);
}

TEST_CASE("analyze writes the artifacts and is byte-reproducible") {
  TempDir dir;
  REQUIRE(cli(dir, "sample -M 50 --seed 7 -o c.json").code == 0);
  REQUIRE(cli(dir, "run --campaign c.json --evaluator ridge:cubic --wtrue-seed 3 --noise 0.01").code == 0);
  const std::string args =
      "analyze --campaign c.json --seed 11 --corners --evaluator ridge:cubic --wtrue-seed 3 --noise 0.01 "
      "--threshold 0.5 --level 0.99 --cdf --n 2000 ";
  const auto a = cli(dir, args + "--out a");
  REQUIRE(a.code == 0);
  CHECK(a.out.find("rank") != std::string::npos);
  const auto b = cli(dir, args, "ASUQ_OUT_DIR=b");
  REQUIRE(b.code == 0);
  for (const char* name : {"results.json", "summary.csv", "surrogate.json", "range.json", "safeset.json", "cdf.csv",
                           "cdf.svg", "summary.svg"}) {
    INFO(name);
    REQUIRE(fs::exists(dir / "a" / name));
    CHECK(slurp(dir / "a" / name) == slurp(dir / "b" / name));
  }
  const auto results = read_json(dir / "a" / "results.json");
  CHECK(results["bootstrap"]["N"] == 100);
  CHECK(results["M"] == 50);
  std::istringstream csv(slurp(dir / "a" / "summary.csv"));
  std::size_t samples = 0;
  for (std::string line; std::getline(csv, line);) samples += line.ends_with(",sample");
  CHECK(samples == 50);
  const auto range = read_json(dir / "a" / "range.json");
  CHECK(range["validated"].is_boolean());
  CHECK(range["f_min"].get<double>() <= range["f_max"].get<double>());
  // corners do not enter the campaign
  CHECK(read_json(dir / "c.json")["runs"].size() == 50);
}

TEST_CASE("analyze rejects too few runs with an actionable message") {
  TempDir dir;
  REQUIRE(cli(dir, "sample -M 5 --seed 1 -o c.json").code == 0);
  REQUIRE(cli(dir, "run --campaign c.json --evaluator ridge:linear --wtrue-seed 1").code == 0);
  const auto r = cli(dir, "analyze --campaign c.json --seed 1 --out o");
  CHECK(r.code == 3);
  CHECK(r.err.find("m+1") != std::string::npos);
  CHECK(r.err.find("49") != std::string::npos);
}

TEST_CASE("standalone range, safeset and cdf") {
  TempDir dir;
  REQUIRE(cli(dir, "sample -M 30 --seed 4 -o c.json").code == 0);
  REQUIRE(cli(dir, "run --campaign c.json --evaluator ridge:linear --wtrue-seed 2").code == 0);
  CHECK(cli(dir, "range --campaign c.json --evaluator ridge:linear --wtrue-seed 2 --out r").code == 0);
  CHECK(read_json(dir / "r" / "range.json")["validated"] == true);
  CHECK(cli(dir, "safeset --campaign c.json --threshold 1e9 --out s").code == 0);
  CHECK(read_json(dir / "s" / "safeset.json")["feasible"] == "full");
  CHECK(cli(dir, "cdf --campaign c.json --seed 5 --n 500 --grid 40 --out d").code == 0);
  std::istringstream csv(slurp(dir / "d" / "cdf.csv"));
  std::size_t lines = 0;
  for (std::string line; std::getline(csv, line);) ++lines;
  CHECK(lines == 41);
}

TEST_CASE("scenario subcommands") {
  TempDir dir;
  const auto fit = cli(dir, "scenario shots-fit");
  CHECK(fit.code == 0);
  CHECK(fit.out.find("508.1") != std::string::npos);
  const auto inflow = cli(dir, "scenario inflow --x 0,0,0,0,0,0,0");
  CHECK(inflow.code == 0);
  const auto j = ordered_json::parse(inflow.out);
  CHECK(j.contains("P_Pa"));
  CHECK(cli(dir, "scenario inflow --x 0,0").code != 0);
  const auto check = cli(dir, "scenario check");
  CHECK(check.code == 0);
  CHECK(check.out.find("DIFF") != std::string::npos);
}
