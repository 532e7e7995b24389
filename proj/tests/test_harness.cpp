#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "loosecore/cli.hpp"
#include "loosecore/cores.hpp"
#include "loosecore/errors.hpp"
#include "loosecore/experiment.hpp"
#include "loosecore/extremal.hpp"
#include "loosecore/factor_graph.hpp"
#include "loosecore/hypergraph.hpp"

using namespace loosecore;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string temp_path(const std::string& name) {
  return "loosecore_test_" + name;
}

}  // namespace

TEST_CASE("total variation distance") {
  const std::vector<double> a{0.5, 0.5};
  CHECK(tv_distance(a, a) == 0.0);
  const std::vector<double> point0{1.0, 0.0};
  const std::vector<double> point1{0.0, 1.0};
  CHECK(tv_distance(point0, point1) == 2.0);  // unhalved L1
  const std::vector<double> b{0.75, 0.25};
  CHECK(tv_distance(a, b) == doctest::Approx(0.5).epsilon(1e-15));
  const std::vector<double> longer{0.5, 0.25, 0.25};
  CHECK_THROWS_AS(tv_distance(a, longer), SupportMismatch);
}

TEST_CASE("certificate bound on hand instances") {
  SUBCASE("empty core gives zero") {
    const auto g = FactorGraph::from_hypergraph(make_loose_path(3, 3));
    CHECK(certificate_bound(g, reduced_core(g)) == 0);
  }
  SUBCASE("pure loose cycle is tight") {
    for (std::size_t len : {2u, 3u, 5u, 7u}) {
      const auto h = make_loose_cycle(3, len);
      const auto g = FactorGraph::from_hypergraph(h);
      CHECK(certificate_bound(g, reduced_core(g)) == len);
      CHECK(brute_force_longest_cycle(h) == len);
    }
  }
  SUBCASE("mismatched input is rejected") {
    const auto g = FactorGraph::from_hypergraph(make_loose_cycle(3, 3));
    const auto other = FactorGraph::from_hypergraph(make_loose_cycle(3, 4));
    CHECK_THROWS_AS(certificate_bound(other, reduced_core(g)), MismatchedInput);
  }
}

TEST_CASE("brute-force extremal search on hand instances") {
  SUBCASE("single edge") {
    Hypergraph h(3, 3);
    h.add_edge({0, 1, 2});
    CHECK(brute_force_longest_path(h) == 1);
    CHECK(brute_force_longest_cycle(h) == 0);
  }
  SUBCASE("edgeless") {
    const Hypergraph h(4, 3);
    CHECK(brute_force_longest_path(h) == 0);
    CHECK(brute_force_longest_cycle(h) == 0);
  }
  SUBCASE("planted cycle of length 3") {
    const auto h = make_loose_cycle(3, 3);
    CHECK(brute_force_longest_cycle(h) == 3);
    // inside the cycle's edges the best path uses two of the three edges
    CHECK(brute_force_longest_path(h) == 2);
  }
  SUBCASE("planted paths") {
    for (std::size_t len : {1u, 2u, 4u, 6u}) {
      CHECK(brute_force_longest_path(make_loose_path(3, len)) == len);
      CHECK(brute_force_longest_cycle(make_loose_path(3, len)) == 0);
    }
  }
  SUBCASE("three edges through one common vertex are not a cycle") {
    Hypergraph h(7, 3);
    h.add_edge({0, 1, 2});
    h.add_edge({0, 3, 4});
    h.add_edge({0, 5, 6});
    CHECK(brute_force_longest_cycle(h) == 0);
    CHECK(brute_force_longest_path(h) == 2);
  }
  SUBCASE("graph triangle for the r = 2 sanity case") {
    Hypergraph h(3, 2);
    h.add_edge({0, 1});
    h.add_edge({1, 2});
    h.add_edge({2, 0});
    CHECK(brute_force_longest_cycle(h) == 3);
    CHECK(brute_force_longest_path(h) == 2);
  }
  SUBCASE("edge cap") {
    const auto h = make_loose_path(3, 6);
    CHECK_THROWS_AS(brute_force_longest_path(h, 5), InstanceTooLarge);
    CHECK_THROWS_AS(brute_force_longest_cycle(h, 5), InstanceTooLarge);
  }
}

TEST_CASE("path-cycle relation and certificate soundness on random instances") {
  int instances = 0;
  for (std::uint64_t seed = 0; instances < 60 && seed < 600; ++seed) {
    const double d = 1.0 + static_cast<double>(seed % 3);
    const auto h = sample_hypergraph(ModelParams::from_degree(3, 12, d, seed));
    if (h.edge_count() > kDefaultExtremalEdgeCap) continue;
    ++instances;
    const std::size_t path = brute_force_longest_path(h);
    const std::size_t cycle = brute_force_longest_cycle(h);
    CHECK(path + 1 >= cycle);
    const auto g = FactorGraph::from_hypergraph(h);
    CHECK(cycle <= certificate_bound(g, reduced_core(g)));
  }
  CHECK(instances == 60);
}

TEST_CASE("experiment on a small model") {
  ExperimentConfig cfg;
  cfg.r = 3;
  cfg.n = 1500;
  cfg.d = 1.0;
  cfg.trials = 3;
  cfg.seed = 11;
  const auto result = run_experiment(cfg);
  REQUIRE(result.trials.size() == 3);
  CHECK_FALSE(result.partial);

  for (const auto& trial : result.trials) {
    // histograms are distributions over the tail-bucketed support
    for (const auto* hist : {&trial.mu, &trial.zeta, &trial.zeta_hat}) {
      double total = 0.0;
      for (double x : *hist) total += x;
      CHECK(std::abs(total - 1.0) < 1e-9);
    }
    // the reduced core has no degree-1 node on either side
    CHECK(trial.zeta[1] == 0.0);
    CHECK(trial.zeta_hat[1] == 0.0);
    // padded and reduced variable histograms agree from degree 2 on
    for (std::size_t j = 2; j < trial.mu.size(); ++j) {
      CHECK(trial.mu[j] == trial.zeta[j]);
    }
    CHECK(trial.core_order_fraction == 1.0 - trial.mu[0]);

    // re-derive the trial instance (determinism) and check the handshake
    const auto h = sample_hypergraph(
        ModelParams::from_degree(cfg.r, cfg.n, cfg.d, trial.seed));
    const auto g = FactorGraph::from_hypergraph(h);
    CHECK(g.factor_count() == trial.m);
    const auto reduced = reduced_core(g);
    std::size_t var_side = 0, fac_side = 0;
    for (std::uint32_t v = 0; v < g.variable_count(); ++v) {
      var_side += reduced.reduced_degree[v];
    }
    for (std::uint32_t f = 0; f < g.factor_count(); ++f) {
      fac_side += reduced.reduced_degree[g.variable_count() + f];
    }
    CHECK(var_side == fac_side);  // both sides count the surviving edges
    CHECK(var_side == reduced.reduced_edge_count);
    CHECK(trial.core_size_fraction ==
          static_cast<double>(reduced.nonisolated_factors) / cfg.n);
  }

  // aggregate means match a direct fold
  double mean_v = 0.0;
  for (const auto& t : result.trials) mean_v += t.core_order_fraction;
  mean_v /= 3.0;
  for (const auto& [name, stat] : result.aggregate) {
    if (name == "core_order_fraction") {
      CHECK(stat.mean == doctest::Approx(mean_v).epsilon(1e-15));
    }
  }
}

TEST_CASE("experiment is deterministic and thread-count invariant") {
  ExperimentConfig cfg;
  cfg.r = 3;
  cfg.n = 800;
  cfg.d = 1.2;
  cfg.trials = 5;
  cfg.seed = 42;
  const std::string a = to_json(run_experiment(cfg));
  const std::string b = to_json(run_experiment(cfg));
  CHECK(a == b);
  cfg.threads = 4;
  const std::string c = to_json(run_experiment(cfg));
  CHECK(a == c);
}

TEST_CASE("experiment records peeling-round diagnostics when asked") {
  ExperimentConfig cfg;
  cfg.r = 3;
  cfg.n = 300;
  cfg.d = 1.0;
  cfg.trials = 1;
  cfg.seed = 3;
  cfg.ell = 0;
  const auto result = run_experiment(cfg);
  REQUIRE(result.trials.size() == 1);
  const auto& trial = result.trials[0];
  REQUIRE_FALSE(trial.zeta_ell.empty());
  // round 0 is the raw degree distribution, so no mass is missing
  double total = 0.0;
  for (double x : trial.zeta_ell) total += x;
  CHECK(std::abs(total - 1.0) < 1e-9);
  // raw mean variable degree is d up to sampling noise
  double mean_deg = 0.0;
  for (std::size_t j = 0; j < trial.zeta_ell.size(); ++j) {
    mean_deg += static_cast<double>(j) * trial.zeta_ell[j];
  }
  CHECK(mean_deg == doctest::Approx(1.0).epsilon(0.35));
}

TEST_CASE("experiment config files parse with overrides") {
  const std::string path = temp_path("config.txt");
  {
    std::ofstream out(path);
    out << "# comment line\n"
        << "r = 4\n"
        << "n = 500\n"
        << "d = 0.9\n"
        << "trials = 2\n"
        << "seed = 77\n"
        << "max_degree = 12\n"
        << "format = csv\n";
  }
  auto cfg = ExperimentConfig::from_file(path);
  CHECK(cfg.r == 4);
  CHECK(cfg.n == 500);
  CHECK(cfg.d == doctest::Approx(0.9));
  CHECK(cfg.trials == 2);
  CHECK(cfg.seed == 77);
  CHECK(cfg.max_degree == 12);
  CHECK(cfg.format == "csv");
  cfg.apply("trials", "6");
  CHECK(cfg.trials == 6);
  CHECK_THROWS_AS(cfg.apply("bogus", "1"), InvalidParams);
  CHECK_THROWS_AS(cfg.apply("trials", "not-a-number"), InvalidParams);
  std::remove(path.c_str());
  CHECK_THROWS_AS(ExperimentConfig::from_file(path), IoError);
}

TEST_CASE("crossing scan behavior by uniformity") {
  SUBCASE("r = 3 has no sign change") {
    std::vector<double> grid;
    for (double d = 0.6; d <= 10.0; d += 0.1) grid.push_back(d);
    const auto scan = crossing_scan(3, grid);
    CHECK(scan.rows.size() == grid.size());
    CHECK(scan.crossings.empty());
  }
  SUBCASE("r = 4 has exactly one crossing at the pinned location") {
    std::vector<double> grid;
    for (double d = 0.43333333333; d <= 10.0; d += 0.1) grid.push_back(d);
    const auto scan = crossing_scan(4, grid);
    REQUIRE(scan.crossings.size() == 1);
    // reference 3.4237135415 from the high-precision oracle
    CHECK(scan.crossings[0] == doctest::Approx(3.4237135415).epsilon(1e-6));
    CHECK(scan.brackets[0].second - scan.brackets[0].first <= 1e-8);
  }
  SUBCASE("r = 5 crossing is bracketed") {
    std::vector<double> grid;
    for (double d = 0.35; d <= 10.0; d += 0.1) grid.push_back(d);
    const auto scan = crossing_scan(5, grid);
    REQUIRE(scan.crossings.size() == 1);
    CHECK(scan.crossings[0] == doctest::Approx(4.7515904951).epsilon(1e-6));
  }
  SUBCASE("grids at or below the threshold are rejected") {
    std::vector<double> bad{0.5, 0.6};
    CHECK_THROWS_AS(crossing_scan(3, bad), InvalidParams);
  }
}

TEST_CASE("CLI predict") {
  const std::string out = temp_path("predict.txt");
  CHECK(cli_main({"loosecore", "predict", "-r", "3", "-d", "0.4", "--out", out}) == 0);
  const std::string text = slurp(out);
  CHECK(text.find("subcritical") != std::string::npos);
  CHECK(text.find("rho_star        0\n") != std::string::npos);
  std::remove(out.c_str());
}

TEST_CASE("CLI generate/core round trip") {
  const std::string file = temp_path("hg.txt");
  CHECK(cli_main({"loosecore", "generate", "-r", "3", "-n", "100", "-d", "1.5",
                  "--seed", "5", "--out", file}) == 0);
  const std::string stats = temp_path("core.json");
  CHECK(cli_main({"loosecore", "core", "--in", file, "--json", "--out", stats}) == 0);
  const std::string text = slurp(stats);
  CHECK(text.find("\"certificate_bound\"") != std::string::npos);

  const std::string csv = temp_path("rounds.csv");
  CHECK(cli_main({"loosecore", "core", "--in", file, "--rounds-csv", csv,
                  "--out", stats}) == 0);
  CHECK(slurp(csv).rfind("node_id,node_type,round_disabled\n", 0) == 0);
  std::remove(file.c_str());
  std::remove(stats.c_str());
  std::remove(csv.c_str());
}

TEST_CASE("CLI experiment is bit-reproducible") {
  const std::string out1 = temp_path("exp1.json");
  const std::string out2 = temp_path("exp2.json");
  const std::vector<std::string> base{"loosecore", "experiment", "-r", "3",
                                      "-n",        "2000",       "-d", "1",
                                      "--trials",  "3",          "--seed", "9"};
  auto with_out = [&](const std::string& path) {
    auto args = base;
    args.push_back("--out");
    args.push_back(path);
    return args;
  };
  CHECK(cli_main(with_out(out1)) == 0);
  CHECK(cli_main(with_out(out2)) == 0);
  CHECK(slurp(out1) == slurp(out2));
  std::remove(out1.c_str());
  std::remove(out2.c_str());
}

TEST_CASE("CLI extremal with a planted cycle") {
  const std::string out = temp_path("extremal.json");
  CHECK(cli_main({"loosecore", "extremal", "--planted-cycle", "4", "-r", "3",
                  "--json", "--out", out}) == 0);
  const std::string text = slurp(out);
  CHECK(text.find("\"longest_loose_cycle\": 4") != std::string::npos);
  CHECK(text.find("\"cycle_within_certificate\": true") != std::string::npos);
  std::remove(out.c_str());
}

TEST_CASE("a failing trial yields a flagged partial report") {
  ExperimentConfig cfg;
  cfg.r = 3;
  cfg.n = 100000;
  cfg.explicit_p = true;
  cfg.p = 1.0;  // passes validation but is not enumerable at this size
  cfg.d = 0.0;
  cfg.trials = 2;
  const auto result = run_experiment(cfg);
  CHECK(result.partial);
  CHECK(result.trials.empty());
  CHECK_FALSE(result.error.empty());
  const std::string json = to_json(result);
  CHECK(json.find("\"partial\": true") != std::string::npos);
}

TEST_CASE("CLI experiment consumes config files with flag overrides") {
  const std::string cfg_path = temp_path("exp_config.txt");
  {
    std::ofstream out(cfg_path);
    out << "r = 3\nn = 400\nd = 1.0\ntrials = 2\nseed = 5\n";
  }
  const std::string out1 = temp_path("exp_cfg1.json");
  const std::string out2 = temp_path("exp_cfg2.json");
  // trials overridden to 1 on the command line
  CHECK(cli_main({"loosecore", "experiment", "--config", cfg_path, "--trials",
                  "1", "--out", out1}) == 0);
  const std::string text = slurp(out1);
  CHECK(text.find("\"trials\": 1") != std::string::npos);
  CHECK(text.find("\"n\": 400") != std::string::npos);

  // csv format via config file
  {
    std::ofstream out(cfg_path, std::ios::app);
    out << "format = csv\n";
  }
  CHECK(cli_main({"loosecore", "experiment", "--config", cfg_path, "--trials",
                  "1", "--out", out2}) == 0);
  CHECK(slurp(out2).rfind("trial,j,mu,zeta,zeta_hat\n", 0) == 0);
  std::remove(cfg_path.c_str());
  std::remove(out1.c_str());
  std::remove(out2.c_str());
}

TEST_CASE("CLI scan reports crossings") {
  const std::string out = temp_path("scan.json");
  CHECK(cli_main({"loosecore", "scan", "-r", "4", "--step", "0.5", "--json",
                  "--out", out}) == 0);
  const std::string text = slurp(out);
  CHECK(text.find("\"crossings\": [") != std::string::npos);
  CHECK(text.find("3.4237135") != std::string::npos);

  const std::string txt = temp_path("scan.txt");
  CHECK(cli_main({"loosecore", "scan", "-r", "3", "--step", "0.5", "--out", txt}) == 0);
  CHECK(slurp(txt).find("no sign change") != std::string::npos);
  std::remove(out.c_str());
  std::remove(txt.c_str());
}

TEST_CASE("CLI exit codes") {
  CHECK(cli_main({"loosecore", "no-such-command"}) == 1);
  CHECK(cli_main({"loosecore"}) == 1);
  CHECK(cli_main({"loosecore", "predict", "--bogus-flag"}) == 1);
  // runtime error: d too large for the binomial coefficient
  CHECK(cli_main({"loosecore", "predict", "-r", "1", "-d", "1"}) == 2);
  CHECK(cli_main({"loosecore", "core", "--in", "definitely_missing_file"}) == 2);
}
