#include "loosecore/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "loosecore/errors.hpp"
#include "loosecore/hypergraph.hpp"

namespace loosecore {

double tv_distance(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) {
    throw SupportMismatch("pmfs must share an indexed support");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) sum += std::abs(p[i] - q[i]);
  return sum;
}

std::size_t certificate_bound(const FactorGraph& g, const CoreResult& reduced) {
  if (reduced.reduced_degree.size() != g.node_count()) {
    throw MismatchedInput("core result does not match the factor graph");
  }
  return std::min(reduced.nonisolated_variables, reduced.nonisolated_factors);
}

void ExperimentConfig::validate() const {
  if (trials < 1) throw InvalidParams("trials must be at least 1");
  if (max_degree < 2) throw InvalidParams("max_degree must be at least 2");
  if (threads < 1) throw InvalidParams("threads must be at least 1");
  if (format != "json" && format != "csv") {
    throw InvalidParams("format must be json or csv");
  }
  // Model-parameter checks happen on construction of the per-trial params.
  if (explicit_p) {
    ModelParams::from_probability(r, n, p, seed).validate();
  } else {
    ModelParams::from_degree(r, n, d, seed).validate();
  }
}

void ExperimentConfig::apply(const std::string& key, const std::string& value) {
  try {
    if (key == "r") {
      r = static_cast<unsigned>(std::stoul(value));
    } else if (key == "n") {
      n = static_cast<std::uint32_t>(std::stoul(value));
    } else if (key == "d") {
      d = std::stod(value);
      explicit_p = false;
    } else if (key == "p") {
      p = std::stod(value);
      explicit_p = true;
    } else if (key == "trials") {
      trials = static_cast<unsigned>(std::stoul(value));
    } else if (key == "seed") {
      seed = std::stoull(value);
    } else if (key == "ell") {
      ell = std::stoi(value);
    } else if (key == "max_degree") {
      max_degree = static_cast<unsigned>(std::stoul(value));
    } else if (key == "threads") {
      threads = static_cast<unsigned>(std::stoul(value));
    } else if (key == "out") {
      out = value;
    } else if (key == "format") {
      format = value;
    } else {
      throw InvalidParams("unknown config key: " + key);
    }
  } catch (const std::logic_error&) {
    throw InvalidParams("bad value for config key " + key + ": " + value);
  }
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);
  ExperimentConfig cfg;
  std::string line;
  auto trim = [](std::string s) {
    const auto first = s.find_first_not_of(" \t\r");
    const auto last = s.find_last_not_of(" \t\r");
    if (first == std::string::npos) return std::string();
    return s.substr(first, last - first + 1);
  };
  while (std::getline(in, line)) {
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw InvalidParams("config lines must look like 'key = value': " + line);
    }
    cfg.apply(trim(stripped.substr(0, eq)), trim(stripped.substr(eq + 1)));
  }
  return cfg;
}

namespace {

// Fold per-degree counts into max_degree+2 slots (tail bucket last).
std::vector<double> fold_histogram(const std::vector<std::size_t>& counts,
                                   std::size_t population, unsigned max_degree) {
  std::vector<double> hist(max_degree + 2, 0.0);
  for (std::size_t j = 0; j < counts.size(); ++j) {
    const std::size_t slot = j <= max_degree ? j : max_degree + 1;
    hist[slot] += static_cast<double>(counts[j]);
  }
  if (population > 0) {
    for (double& x : hist) x /= static_cast<double>(population);
  }
  return hist;
}

std::vector<double> fold_law(const std::function<double(unsigned)>& pmf,
                             unsigned max_degree) {
  std::vector<double> law(max_degree + 2, 0.0);
  double total = 0.0;
  for (unsigned j = 0; j <= max_degree; ++j) {
    law[j] = pmf(j);
    total += law[j];
  }
  law[max_degree + 1] = std::max(0.0, 1.0 - total);
  return law;
}

std::vector<std::size_t> degree_counts(const std::vector<std::uint32_t>& degrees,
                                       std::size_t begin, std::size_t end) {
  std::uint32_t max_deg = 0;
  for (std::size_t i = begin; i < end; ++i) max_deg = std::max(max_deg, degrees[i]);
  std::vector<std::size_t> counts(max_deg + 1, 0);
  for (std::size_t i = begin; i < end; ++i) ++counts[degrees[i]];
  return counts;
}

TrialReport run_trial(const ExperimentConfig& cfg, unsigned index,
                      const std::vector<double>& law_mu,
                      const std::vector<double>& law_zeta,
                      const std::vector<double>& law_zeta_hat) {
  const auto t0 = std::chrono::steady_clock::now();
  TrialReport report;
  report.index = index;
  report.seed = cfg.seed + index;

  const ModelParams params =
      cfg.explicit_p
          ? ModelParams::from_probability(cfg.r, cfg.n, cfg.p, report.seed)
          : ModelParams::from_degree(cfg.r, cfg.n, cfg.d, report.seed);
  const Hypergraph h = sample_hypergraph(params);
  const FactorGraph g = FactorGraph::from_hypergraph(h);
  report.m = g.factor_count();

  const CoreResult reduced = reduced_core(g, PeelMode::synchronous);
  const CoreResult padded = padded_core_from_reduced(g, reduced);
  report.rounds_to_fixpoint = reduced.rounds_to_fixpoint;
  report.certificate = certificate_bound(g, reduced);

  const auto var_counts = degree_counts(reduced.reduced_degree, 0, cfg.n);
  const auto fac_counts =
      degree_counts(reduced.reduced_degree, cfg.n, cfg.n + report.m);
  const auto mu_counts = degree_counts(padded.padded_variable_degree, 0, cfg.n);
  report.zeta = fold_histogram(var_counts, cfg.n, cfg.max_degree);
  report.zeta_hat = fold_histogram(fac_counts, report.m, cfg.max_degree);
  report.mu = fold_histogram(mu_counts, cfg.n, cfg.max_degree);

  // v(C)/n = 1 - mu_0 by construction; e(C)/n counts surviving factors.
  report.core_order_fraction = 1.0 - report.mu[0];
  report.core_size_fraction =
      static_cast<double>(reduced.nonisolated_factors) / cfg.n;

  report.tv_mu = tv_distance(report.mu, law_mu);
  report.tv_zeta = tv_distance(report.zeta, law_zeta);
  report.tv_zeta_hat = tv_distance(report.zeta_hat, law_zeta_hat);

  if (cfg.ell >= 0) {
    // degrees_after_round returns proportions; refold onto the report slots.
    auto [var_ell, fac_ell] = degrees_after_round(g, static_cast<unsigned>(cfg.ell));
    report.zeta_ell.assign(cfg.max_degree + 2, 0.0);
    for (std::size_t j = 0; j < var_ell.size(); ++j) {
      report.zeta_ell[std::min<std::size_t>(j, cfg.max_degree + 1)] += var_ell[j];
    }
    report.zeta_hat_ell.assign(cfg.max_degree + 2, 0.0);
    for (std::size_t j = 0; j < fac_ell.size(); ++j) {
      report.zeta_hat_ell[std::min<std::size_t>(j, cfg.max_degree + 1)] += fac_ell[j];
    }
  }

  report.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

AggregateStat aggregate_of(const std::vector<TrialReport>& trials,
                           double (*get)(const TrialReport&)) {
  AggregateStat stat;
  const std::size_t k = trials.size();
  if (k == 0) return stat;
  double sum = 0.0;
  for (const auto& t : trials) sum += get(t);
  stat.mean = sum / static_cast<double>(k);
  if (k > 1) {
    double ss = 0.0;
    for (const auto& t : trials) {
      const double dev = get(t) - stat.mean;
      ss += dev * dev;
    }
    stat.stddev = std::sqrt(ss / static_cast<double>(k - 1));
  }
  return stat;
}

std::vector<double> mean_histogram(const std::vector<TrialReport>& trials,
                                   std::vector<double> TrialReport::* member,
                                   std::size_t slots) {
  std::vector<double> mean(slots, 0.0);
  if (trials.empty()) return mean;
  for (const auto& t : trials) {
    const auto& hist = t.*member;
    for (std::size_t j = 0; j < slots; ++j) mean[j] += hist[j];
  }
  for (double& x : mean) x /= static_cast<double>(trials.size());
  return mean;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  ExperimentResult result;
  result.config = cfg;

  const double d_effective =
      cfg.explicit_p ? ModelParams::from_probability(cfg.r, cfg.n, cfg.p, 0).d
                     : cfg.d;
  result.prediction = derived_params(cfg.r, d_effective);
  const AnalyticParams& pred = result.prediction;
  result.law_zeta = fold_law(
      [&](unsigned j) { return po_tilde_pmf(pred.d * pred.rho_hat_star, j); },
      cfg.max_degree);
  result.law_zeta_hat = fold_law(
      [&](unsigned j) { return bi_tilde_pmf(cfg.r, pred.rho_star, j); },
      cfg.max_degree);
  result.law_mu =
      fold_law([&](unsigned j) { return z_pmf(pred, j); }, cfg.max_degree);

  std::vector<TrialReport> trials(cfg.trials);
  std::vector<char> done(cfg.trials, 0);
  std::vector<std::string> errors(cfg.trials);

  const unsigned workers = std::min<unsigned>(cfg.threads, cfg.trials);
  if (workers <= 1) {
    for (unsigned i = 0; i < cfg.trials; ++i) {
      try {
        trials[i] = run_trial(cfg, i, result.law_mu, result.law_zeta,
                              result.law_zeta_hat);
        done[i] = 1;
      } catch (const std::exception& e) {
        errors[i] = e.what();
        break;
      }
    }
  } else {
    std::atomic<unsigned> next{0};
    auto work = [&]() {
      for (;;) {
        const unsigned i = next.fetch_add(1);
        if (i >= cfg.trials) return;
        try {
          trials[i] = run_trial(cfg, i, result.law_mu, result.law_zeta,
                                result.law_zeta_hat);
          done[i] = 1;
        } catch (const std::exception& e) {
          errors[i] = e.what();
        }
      }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }

  // Keep the completed prefix; a failure truncates the report.
  std::vector<TrialReport> completed;
  completed.reserve(cfg.trials);
  for (unsigned i = 0; i < cfg.trials; ++i) {
    if (!done[i]) {
      result.partial = true;
      result.error = errors[i].empty() ? "trial failed" : errors[i];
      break;
    }
    completed.push_back(std::move(trials[i]));
  }
  result.trials = std::move(completed);

  result.aggregate = {
      {"core_order_fraction",
       aggregate_of(result.trials,
                    [](const TrialReport& t) { return t.core_order_fraction; })},
      {"core_size_fraction",
       aggregate_of(result.trials,
                    [](const TrialReport& t) { return t.core_size_fraction; })},
      {"factor_count", aggregate_of(result.trials, [](const TrialReport& t) {
         return static_cast<double>(t.m);
       })},
      {"certificate", aggregate_of(result.trials, [](const TrialReport& t) {
         return static_cast<double>(t.certificate);
       })},
      {"rounds_to_fixpoint",
       aggregate_of(result.trials, [](const TrialReport& t) {
         return static_cast<double>(t.rounds_to_fixpoint);
       })},
      {"tv_mu",
       aggregate_of(result.trials, [](const TrialReport& t) { return t.tv_mu; })},
      {"tv_zeta", aggregate_of(result.trials,
                               [](const TrialReport& t) { return t.tv_zeta; })},
      {"tv_zeta_hat", aggregate_of(result.trials, [](const TrialReport& t) {
         return t.tv_zeta_hat;
       })},
  };

  const std::size_t slots = cfg.max_degree + 2;
  const auto mean_mu = mean_histogram(result.trials, &TrialReport::mu, slots);
  const auto mean_zeta = mean_histogram(result.trials, &TrialReport::zeta, slots);
  const auto mean_zeta_hat =
      mean_histogram(result.trials, &TrialReport::zeta_hat, slots);
  if (!result.trials.empty()) {
    result.tv_mu_mean = tv_distance(mean_mu, result.law_mu);
    result.tv_zeta_mean = tv_distance(mean_zeta, result.law_zeta);
    result.tv_zeta_hat_mean = tv_distance(mean_zeta_hat, result.law_zeta_hat);
  }
  return result;
}

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json json_of_params(const AnalyticParams& p) {
  ordered_json j;
  j["r"] = p.r;
  j["d"] = p.d;
  j["d_star"] = p.d_star;
  j["rho_star"] = p.rho_star;
  j["rho_hat_star"] = p.rho_hat_star;
  j["eta"] = p.eta;
  j["alpha"] = p.alpha;
  j["beta"] = p.beta;
  j["gamma"] = p.gamma;
  j["solver_tolerance"] = p.tolerance;
  j["supercritical"] = p.supercritical;
  j["at_threshold"] = p.at_threshold;
  return j;
}

}  // namespace

std::string to_json(const ExperimentResult& result) {
  ordered_json root;
  root["schema_version"] = 1;

  ordered_json cfg;
  cfg["r"] = result.config.r;
  cfg["n"] = result.config.n;
  if (result.config.explicit_p) {
    cfg["p"] = result.config.p;
  } else {
    cfg["d"] = result.config.d;
  }
  cfg["trials"] = result.config.trials;
  cfg["seed"] = result.config.seed;
  cfg["ell"] = result.config.ell;
  cfg["max_degree"] = result.config.max_degree;
  root["config"] = std::move(cfg);

  ordered_json pred = json_of_params(result.prediction);
  ordered_json laws;
  laws["mu"] = result.law_mu;
  laws["zeta"] = result.law_zeta;
  laws["zeta_hat"] = result.law_zeta_hat;
  pred["laws"] = std::move(laws);
  root["predictions"] = std::move(pred);

  ordered_json per_trial = ordered_json::array();
  for (const auto& t : result.trials) {
    ordered_json jt;
    jt["index"] = t.index;
    jt["seed"] = t.seed;
    jt["m"] = t.m;
    jt["core_order_fraction"] = t.core_order_fraction;
    jt["core_size_fraction"] = t.core_size_fraction;
    jt["certificate"] = t.certificate;
    jt["rounds_to_fixpoint"] = t.rounds_to_fixpoint;
    ordered_json tv;
    tv["mu"] = t.tv_mu;
    tv["zeta"] = t.tv_zeta;
    tv["zeta_hat"] = t.tv_zeta_hat;
    jt["tv"] = std::move(tv);
    ordered_json hists;
    hists["mu"] = t.mu;
    hists["zeta"] = t.zeta;
    hists["zeta_hat"] = t.zeta_hat;
    if (!t.zeta_ell.empty()) {
      hists["zeta_ell"] = t.zeta_ell;
      hists["zeta_hat_ell"] = t.zeta_hat_ell;
    }
    jt["histograms"] = std::move(hists);
    per_trial.push_back(std::move(jt));
  }
  root["per_trial"] = std::move(per_trial);

  ordered_json agg;
  for (const auto& [name, stat] : result.aggregate) {
    ordered_json js;
    js["mean"] = stat.mean;
    js["stddev"] = stat.stddev;
    agg[name] = std::move(js);
  }
  root["aggregate"] = std::move(agg);

  ordered_json tv;
  tv["mu"] = result.tv_mu_mean;
  tv["zeta"] = result.tv_zeta_mean;
  tv["zeta_hat"] = result.tv_zeta_hat_mean;
  root["tv"] = std::move(tv);

  if (result.partial) {
    root["partial"] = true;
    root["error"] = result.error;
  }
  return root.dump(2) + "\n";
}

void write_csv(const ExperimentResult& result, std::ostream& out) {
  out << "trial,j,mu,zeta,zeta_hat\n";
  for (const auto& t : result.trials) {
    for (std::size_t j = 0; j < t.mu.size(); ++j) {
      out << t.index << ',' << j << ',' << t.mu[j] << ',' << t.zeta[j] << ','
          << t.zeta_hat[j] << '\n';
    }
  }
}

CrossingScan crossing_scan(unsigned r, std::span<const double> d_grid,
                           double solver_tol) {
  if (d_grid.empty()) throw InvalidParams("scan grid must be non-empty");
  const double d_star = 1.0 / (r - 1);
  CrossingScan scan;
  scan.r = r;
  auto diff_at = [&](double d) {
    const AnalyticParams p = derived_params(r, d, solver_tol);
    return p.beta - p.gamma;
  };
  for (double d : d_grid) {
    if (!(d > d_star)) {
      throw InvalidParams("scan grid must lie strictly above d_star");
    }
    const AnalyticParams p = derived_params(r, d, solver_tol);
    scan.rows.push_back({d, p.beta, p.gamma});
  }
  for (std::size_t i = 1; i < scan.rows.size(); ++i) {
    const double fa = scan.rows[i - 1].beta - scan.rows[i - 1].gamma;
    const double fb = scan.rows[i].beta - scan.rows[i].gamma;
    if (fa == 0.0 || fa * fb >= 0.0) continue;
    double lo = scan.rows[i - 1].d;
    double hi = scan.rows[i].d;
    double flo = fa;
    while (hi - lo > 1e-8) {
      const double mid = 0.5 * (lo + hi);
      const double fm = diff_at(mid);
      if (fm == 0.0) {
        lo = hi = mid;
        break;
      }
      if ((flo < 0.0) == (fm < 0.0)) {
        lo = mid;
        flo = fm;
      } else {
        hi = mid;
      }
    }
    scan.brackets.emplace_back(lo, hi);
    scan.crossings.push_back(0.5 * (lo + hi));
  }
  return scan;
}

}  // namespace loosecore
