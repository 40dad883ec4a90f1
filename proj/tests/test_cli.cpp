#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "gla/cli.hpp"

using namespace gla;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("gla_cli_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

cli::Outcome run(cli::Invocation inv, const fs::path& out) {
  inv.out = out.string();
  std::ostringstream log;
  return cli::run(inv, log);
}

// Two penalty laws differing only in p share every uniform, so the optimum
// can only grow with p.
constexpr const char* kScanConfig = R"({"n": 4, "reps": 6, "values": [0.3, 0.5, 0.7, 0.9]})";

}  // namespace

TEST_CASE("solve on a constant field takes the whole box") {
  const auto out = scratch("solve");
  cli::Invocation inv{"solve"};
  inv.config = Json::parse(R"({"distribution": {"family": "degenerate", "c": 1},
                               "problem": "box", "box": {"anchor": [0, 0], "side": 3}})");
  const auto res = run(inv, out);
  REQUIRE(res.exit_code == cli::kOk);
  const auto r = Json::parse(slurp(fs::path(res.out_dir) / "result.json"));
  CHECK(r["value"].get<double>() == 9.0);
  CHECK(r["size"] == 9);
  CHECK(r["optimal"] == true);
  std::vector<std::string> keys;
  for (const auto& [k, v] : r.items()) keys.push_back(k);
  CHECK(keys == std::vector<std::string>{"value", "size", "sites", "optimal", "nodes_explored"});
}

TEST_CASE("config validation happens before any output") {
  const auto out = scratch("schema");
  cli::Invocation inv{"solve"};
  inv.config = Json::parse(R"({"box": {"anchor": [0, 0], "sid": 3}})");
  CHECK(run(inv, out).exit_code == cli::kBadConfig);
  inv.config = Json::parse(R"({"distribution": {"family": "two_point_penalty", "p": 1.5, "lambda": 1}})");
  CHECK(run(inv, out).exit_code == cli::kBadConfig);
  inv.config = Json::parse(R"({"mode": "fast"})");
  CHECK(run(inv, out).exit_code == cli::kBadConfig);
  CHECK_FALSE(fs::exists(out));
  cli::Invocation bad{"verify"};
  bad.check = "nonsense";
  CHECK(run(bad, out).exit_code == cli::kBadConfig);
}

TEST_CASE("budget overruns map to their own exit code") {
  const auto out = scratch("budget");
  cli::Invocation inv{"solve"};
  inv.config = Json::parse(R"({"problem": "rooted", "size": 30})");
  CHECK(run(inv, out).exit_code == cli::kBudget);
}

TEST_CASE("verify lipschitz holds and writes a verdict table") {
  const auto out = scratch("verify");
  cli::Invocation inv{"verify"};
  inv.check = "lipschitz";
  inv.config = Json::parse(R"({"lipschitz": {"instances": 10}})");
  const auto res = run(inv, out);
  REQUIRE(res.exit_code == cli::kOk);
  const auto v = Json::parse(slurp(fs::path(res.out_dir) / "verdicts.json"));
  REQUIRE(v.size() == 1);
  CHECK(v[0]["status"] == "HoldsExactly");
  CHECK(slurp(fs::path(res.out_dir) / "verdicts.txt").find("lipschitz") != std::string::npos);
}

TEST_CASE("scan over p is monotone seed by seed") {
  const auto out = scratch("scan");
  cli::Invocation inv{"scan"};
  inv.config = Json::parse(kScanConfig);
  inv.plot_data = true;
  const auto res = run(inv, out);
  REQUIRE(res.exit_code == cli::kOk);
  CHECK(Json::parse(slurp(fs::path(res.out_dir) / "summary.json"))["per_seed_monotone"] == true);
  CHECK(slurp(fs::path(res.out_dir) / "plot.csv").rfind("x,y,ci\n", 0) == 0);
}

TEST_CASE("overrides change the hash but the output root does not") {
  cli::Invocation a{"estimate"};
  auto b = a;
  b.out = "elsewhere";
  auto c = a;
  c.seed = 99;
  const auto h = [](const cli::Invocation& i) { return cli::config_hash(cli::effective_config(i)); };
  CHECK(h(a) == h(b));
  CHECK(h(a) != h(c));
  CHECK(cli::effective_config(c)["seed"] == 99);
}

TEST_CASE("rerunning from a manifest reproduces every output byte for byte") {
  const auto out = scratch("rerun");
  cli::Invocation inv{"estimate"};
  inv.config = Json::parse(R"({"statistic": "G_L", "n_list": [3, 4], "reps": 5, "seed": 12})");
  const auto first = run(inv, out);
  REQUIRE(first.exit_code == cli::kOk);
  cli::Invocation again{"estimate"};
  again.config = Json::parse(slurp(fs::path(first.out_dir) / "manifest.json"));
  std::ostringstream log;
  const auto second = cli::run(again, log);
  REQUIRE(second.exit_code == cli::kOk);
  CHECK(second.out_dir == first.out_dir);
  // Rerun into a fresh root and compare.
  const auto other = scratch("rerun_copy");
  const auto third = run(again, other);
  REQUIRE(third.files == first.files);
  for (const auto& f : first.files) {
    if (f == "manifest.json") continue;
    CHECK(slurp(fs::path(first.out_dir) / f) == slurp(fs::path(third.out_dir) / f));
  }
}
