#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "dirac1d/io.hpp"
#include "dirac1d/sweep.hpp"

using namespace dirac1d;
using Catch::Approx;

TEST_CASE("aggregate statistics on a tiny sample") {
  const Aggregate a = aggregate({1.0, 2.0, 3.0});
  CHECK(a.mean == 2.0);
  CHECK(a.median == 2.0);
  CHECK(a.stderr_ == Approx(1.0 / std::sqrt(3.0)).margin(1e-15));
  CHECK(a.min == 1.0);
  CHECK(a.max == 3.0);
  CHECK(a.count == 3);
  CHECK_FALSE(a.degenerate);
}

TEST_CASE("aggregate of a single value is degenerate") {
  const Aggregate a = aggregate({4.5});
  CHECK(a.mean == 4.5);
  CHECK(a.median == 4.5);
  CHECK(a.stderr_ == 0.0);
  CHECK(a.degenerate);
  CHECK_THROWS_AS(aggregate({}), std::invalid_argument);
}

TEST_CASE("aggregate is permutation invariant bit for bit") {
  std::vector<double> v{0.31, -2.0, 17.5, 0.31, 3.25, -9.0, 4.125};
  const Aggregate a = aggregate(v);
  std::reverse(v.begin(), v.end());
  const Aggregate b = aggregate(v);
  CHECK(a.mean == b.mean);
  CHECK(a.median == b.median);
  CHECK(a.stderr_ == b.stderr_);
  CHECK(a.min == b.min);
  CHECK(a.max == b.max);
}

TEST_CASE("even sample size uses the lower middle as median") {
  const Aggregate a = aggregate({1.0, 2.0, 5.0, 9.0});
  CHECK(a.median == 2.0);
}

TEST_CASE("lyapunov sweep produces one aggregate per grid point") {
  SweepConfig cfg;
  cfg.energies = {0.0, 0.25, 0.5, 0.75, 1.0};
  cfg.potentials = {0.5};
  cfg.masses = {0.0};
  cfg.steps = 50'000;
  cfg.realizations = 16;
  cfg.master_seed = 7;
  const SweepResult res = run_sweep(cfg, "lyapunov");
  REQUIRE(res.points.size() == 5);
  REQUIRE(res.aggregates.size() == 5);
  for (const auto& rec : res.records) CHECK(rec.size() == 16);
  for (const auto& a : res.aggregates) {
    CHECK(a.count == 16);
    CHECK_FALSE(a.degenerate);
    CHECK(a.min <= a.median);
    CHECK(a.median <= a.max);
  }
}

TEST_CASE("single-realization sweeps flag degenerate statistics") {
  SweepConfig cfg;
  cfg.energies = {0.5};
  cfg.potentials = {0.5};
  cfg.steps = 10'000;
  cfg.realizations = 1;
  const SweepResult res = run_sweep(cfg, "lyapunov");
  REQUIRE(res.aggregates.size() == 1);
  CHECK(res.aggregates[0].stderr_ == 0.0);
  CHECK(res.aggregates[0].degenerate);
}

TEST_CASE("sweep outputs do not depend on the parallelism degree") {
  SweepConfig cfg;
  cfg.energies = {0.1, 0.5};
  cfg.potentials = {0.5, 1.0};
  cfg.masses = {0.0, 1.0};
  cfg.steps = 20'000;
  cfg.realizations = 5;
  cfg.master_seed = 11;
  cfg.parallelism = 1;
  const SweepResult serial = run_sweep(cfg, "lyapunov");
  const std::string csv1 = sweep_aggregate_csv(serial, cfg);
  const std::string jsonl1 = sweep_records_jsonl(serial, cfg);
  cfg.parallelism = 8;
  const SweepResult wide = run_sweep(cfg, "lyapunov");
  CHECK(csv1 == sweep_aggregate_csv(wide, cfg));
  CHECK(jsonl1 == sweep_records_jsonl(wide, cfg));
}

TEST_CASE("unknown tasks and bad configurations are rejected") {
  SweepConfig cfg;
  CHECK_THROWS_AS(run_sweep(cfg, "frobnicate"), std::invalid_argument);
  cfg.realizations = 0;
  CHECK_THROWS_AS(run_sweep(cfg, "lyapunov"), std::invalid_argument);
}

TEST_CASE("wegner sweep counts near-spectrum hits") {
  SweepConfig cfg;
  cfg.energies = {0.2};
  cfg.potentials = {1.0};
  cfg.masses = {1.0};
  cfg.lengths = {4};
  cfg.realizations = 40;
  cfg.master_seed = 3;
  const SweepResult res = run_sweep(cfg, "wegner");
  REQUIRE(res.aggregates.size() == 1);
  for (double v : res.records[0]) CHECK((v == 0.0 || v == 1.0));
  CHECK(res.aggregates[0].mean >= 0.0);
  CHECK(res.aggregates[0].mean <= 1.0);
}

TEST_CASE("hashing and hex formatting are stable") {
  CHECK(fnv1a("") == 14695981039346656037ull);
  CHECK(fnv1a("a") == 12638187200555641996ull);
  CHECK(hex64(0) == "0000000000000000");
  CHECK(hex64(0xdeadbeefull) == "00000000deadbeef");
}

TEST_CASE("provenance headers carry every key and a config hash") {
  const Provenance kv{{"m", "1"}, {"c", "1"}, {"seed", "7"}};
  const std::string header = provenance_header(kv);
  CHECK(header.find("# m=1\n") != std::string::npos);
  CHECK(header.find("# c=1\n") != std::string::npos);
  CHECK(header.find("# seed=7\n") != std::string::npos);
  CHECK(header.find("# config_hash=") != std::string::npos);
}

TEST_CASE("moment series serialization carries data rows") {
  MomentSeries s;
  s.q = 2.0;
  s.times = {1.0, 2.0};
  s.values = {0.5, 1.25};
  const std::string csv = moment_series_csv(s, {{"m", "0"}});
  CHECK(csv.find("t,value\n") != std::string::npos);
  CHECK(csv.find("\n1,0.5\n") != std::string::npos);
  CHECK(csv.find("\n2,1.25\n") != std::string::npos);
}

TEST_CASE("sweep serialization has one csv row per point and one json line per record") {
  SweepConfig cfg;
  cfg.energies = {0.1, 0.5};
  cfg.potentials = {0.5};
  cfg.steps = 5'000;
  cfg.realizations = 3;
  const SweepResult res = run_sweep(cfg, "lyapunov");
  const std::string csv = sweep_aggregate_csv(res, cfg);
  const std::string jsonl = sweep_records_jsonl(res, cfg);
  CHECK(std::count(csv.begin(), csv.end(), '\n') >=
        2 + 1);  // header comments + column row + 2 data rows
  CHECK(csv.find("E,V,m,c,q,L,T,count,mean,median,stderr,min,max,degenerate") !=
        std::string::npos);
  CHECK(std::count(jsonl.begin(), jsonl.end(), '\n') == 6);
  CHECK(jsonl.find("\"task\":\"lyapunov\"") != std::string::npos);
  CHECK(jsonl.find("\"config_hash\"") != std::string::npos);
}

TEST_CASE("laplace table serialization keeps columns aligned") {
  const std::string csv = laplace_sweep_csv({4.0}, {1.5}, {1.52}, {{"q", "2"}});
  CHECK(csv.find("T,A_time,A_energy,rel_diff") != std::string::npos);
  CHECK(csv.find("\n4,1.5,1.52,") != std::string::npos);
}
