#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "metricpc/errors.hpp"
#include "metricpc/energy.hpp"
#include "metricpc/harness.hpp"

using namespace metricpc;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("metricpc_unit_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("N schedules") {
  CHECK(pow2_schedule(3, 5) == std::vector<std::size_t>{8, 16, 32});
  CHECK(nm_schedule(Rational(1, 100), 1, 10) ==
        std::vector<std::size_t>{2, 7, 19, 53, 142, 382, 1025, 2745, 7347, 19655});
}

TEST_CASE("config parsing") {
  const auto c = parse_config("sequence=lacunary\nref_base=3\nn_alpha=4\nseed=9\nN=50,100\n"
                              "s=1/2,2\ndecomposition=false\nout=/tmp/x\n");
  CHECK(c.sequence == "lacunary");
  CHECK(c.reference.base == 3);
  CHECK(c.N == std::vector<std::size_t>{50, 100});
  CHECK(c.s_grid == std::vector<Rational>{Rational(1, 2), Rational(2)});
  CHECK_FALSE(c.decomposition);
  const auto d = parse_config("jmax=14\nepsilon=1/200\nN=pow2:10:12\n");
  CHECK(d.plan.jmax == 14);
  CHECK(d.plan.epsilon == Rational(1, 200));
  CHECK(d.N == std::vector<std::size_t>{1024, 2048, 4096});
  CHECK(parse_config("").N == pow2_schedule(10, 19));
  CHECK_THROWS_AS(parse_config("colour=red\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("N=100,50\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("sequence=fibonacci\n"), ConfigError);
  // Formatting is canonical, so the hash only sees the meaning.
  CHECK(config_hash(parse_config(format_config(c))) == config_hash(c));
  CHECK(config_hash(c) != config_hash(d));
  CHECK(config_hash(c).size() == 16);
}

TEST_CASE("one alpha, one N, one s gives one row") {
  auto c = parse_config("sequence=linear\nn_alpha=1\nN=64\ns=1\n");
  c.out = fresh_dir("one_row");
  const auto r = run_experiment(c);
  REQUIRE(r.rows.size() == 1);
  CHECK(r.rows[0].N == 64);
  CHECK_FALSE(r.rows[0].classes);
  CHECK(read_rows(c.out / "rows.csv").size() == 1);
  fs::remove_all(c.out);
}

TEST_CASE("runs are deterministic and resumable") {
  const std::string text = "jmax=10\nn_alpha=3\nseed=5\nN=256,1024\ns=1/2,1\n";
  auto a = parse_config(text);
  a.out = fresh_dir("det_a");
  auto b = a;
  b.out = fresh_dir("det_b");
  run_experiment(a);
  run_experiment(b);
  const auto rows_a = slurp(a.out / "rows.csv");
  CHECK(rows_a == slurp(b.out / "rows.csv"));
  CHECK(rows_a.rfind("alpha_id,N,s_num,s_den,R,R_GG,R_AG,R_AAdiff,R_AAsame\n", 0) == 0);

  // Drop the last line (a partial (alpha, N) item) and resume.
  auto lines = rows_a;
  lines.pop_back();
  lines = lines.substr(0, lines.rfind('\n') + 1);
  {
    std::ofstream out(b.out / "rows.csv", std::ios::trunc);
    out << lines;
  }
  const auto resumed = run_experiment(b);
  CHECK(resumed.skipped == 5);
  CHECK(slurp(b.out / "rows.csv") == rows_a);

  auto other = a;
  other.seed = 6;
  CHECK_THROWS_AS(run_experiment(other), ConfigError);

  const auto json_text = summarize(a.out);
  const auto j = nlohmann::json::parse(json_text);
  CHECK(j["n_alpha"] == 3);
  CHECK(j["config_hash"] == config_hash(a));
  CHECK(j["tables"]["pair_correlation"].size() == 4);
  CHECK(fs::exists(a.out / "summary.json"));
  fs::remove_all(a.out);
  fs::remove_all(b.out);
}

TEST_CASE("single sample has zero variance") {
  auto c = parse_config("sequence=power\nn_alpha=1\nN=100\ns=1\n");
  c.out = fresh_dir("single");
  run_experiment(c);
  const auto j = nlohmann::json::parse(summarize(c.out));
  CHECK(j["tables"]["pair_correlation"][0]["R"]["variance"] == 0.0);
  fs::remove_all(c.out);
}

TEST_CASE("precision") {
  auto c = parse_config("sequence=lacunary\nn_alpha=1\nN=500\nprecision=300\n");
  c.out = fresh_dir("precision");
  CHECK_THROWS_AS(run_experiment(c), PrecisionError);
  c.precision.reset();
  const auto seq = experiment_sequence(c);
  CHECK(experiment_precision(c, seq) >= 564);
  fs::remove_all(c.out);
}

TEST_CASE("block-boundary energies") {
  SequencePlan plan;
  plan.jmax = 9;
  const auto rows = boundary_energies(plan, 2000, kDefaultPairBudget);
  REQUIRE_FALSE(rows.empty());
  for (const auto& r : rows) {
    REQUIRE(r.E);
    CHECK(*r.E >= r.analytic);
    const Natural m = r.M;
    CHECK(r.analytic * 3 == 2 * m * m * m + m);
  }
}

TEST_CASE("extras: variance, energy and M_j outputs") {
  auto c = parse_config("jmax=9\nn_alpha=2\nN=256,512\ns=1\nenergy=true\nenergy_max_n=600\n"
                        "mj=true\nmj_levels=16\nvariance=true\nvariance_H=200\n");
  c.out = fresh_dir("extras");
  run_experiment(c);
  CHECK(fs::exists(c.out / "energy.csv"));
  CHECK(slurp(c.out / "mj.csv").rfind("alpha_id,j,s_num,s_den,modulus,Q,count,route\n", 0) == 0);
  const auto var = slurp(c.out / "variance.csv");
  CHECK(var.find("\n256,1,1,AG,") != std::string::npos);
  CHECK(var.find("\n512,1,1,AAdiff,") != std::string::npos);
  const auto j = nlohmann::json::parse(summarize(c.out));
  CHECK_FALSE(j["tables"]["energy"].empty());
  fs::remove_all(c.out);
}
