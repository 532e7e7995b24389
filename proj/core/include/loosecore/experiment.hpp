#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "loosecore/analytic.hpp"
#include "loosecore/cores.hpp"

namespace loosecore {

/// Total variation distance as the unhalved L1 sum over a shared indexed
/// support. Throws SupportMismatch if the supports differ in length.
double tv_distance(std::span<const double> p, std::span<const double> q);

/// Deterministic upper bound on the longest loose cycle: the smaller of the
/// non-isolated variable and factor counts of the reduced core.
std::size_t certificate_bound(const FactorGraph& g, const CoreResult& reduced);

struct ExperimentConfig {
  unsigned r = 3;
  std::uint32_t n = 1000;
  double d = 1.0;
  bool explicit_p = false;  // if set, p overrides d
  double p = 0.0;
  unsigned trials = 1;
  std::uint64_t seed = 0;
  int ell = -1;  // if >= 0, also record degree histograms after `ell` rounds
  unsigned max_degree = 30;  // histograms track j = 0..max_degree plus a tail
  unsigned threads = 1;
  std::string out;             // output path; empty = stdout
  std::string format = "json";  // "json" or "csv"

  void validate() const;
  /// Flat "key = value" config file with exactly these field names.
  static ExperimentConfig from_file(const std::string& path);
  void apply(const std::string& key, const std::string& value);
};

/// Per-trial measurements. Histograms have max_degree+2 slots: j = 0..J and
/// one tail bucket. `seconds` is informational and deliberately kept out of
/// the serialized report so that reports are bit-reproducible.
struct TrialReport {
  unsigned index = 0;
  std::uint64_t seed = 0;
  std::size_t m = 0;  // factor node count
  std::vector<double> mu;        // variable degrees in the padded core
  std::vector<double> zeta;      // variable degrees in the reduced core
  std::vector<double> zeta_hat;  // factor degrees in the reduced core
  std::vector<double> zeta_ell;      // after `ell` rounds, if requested
  std::vector<double> zeta_hat_ell;  // after `ell` rounds, if requested
  double core_order_fraction = 0.0;  // v(C)/n = 1 - mu[0]
  double core_size_fraction = 0.0;   // e(C)/n
  std::size_t certificate = 0;
  unsigned rounds_to_fixpoint = 0;
  double tv_mu = 0.0;
  double tv_zeta = 0.0;
  double tv_zeta_hat = 0.0;
  double seconds = 0.0;
};

struct AggregateStat {
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation (0 for a single trial)
};

struct ExperimentResult {
  ExperimentConfig config;
  AnalyticParams prediction;
  // Limiting laws folded onto the same max_degree+2 support as the
  // empirical histograms.
  std::vector<double> law_mu;
  std::vector<double> law_zeta;
  std::vector<double> law_zeta_hat;
  std::vector<TrialReport> trials;
  std::vector<std::pair<std::string, AggregateStat>> aggregate;
  // Distances of the mean empirical histograms to the laws.
  double tv_mu_mean = 0.0;
  double tv_zeta_mean = 0.0;
  double tv_zeta_hat_mean = 0.0;
  bool partial = false;   // a trial failed; completed prefix retained
  std::string error;
};

/// Runs `trials` independent trials (trial i uses seed base+i), extracting
/// the reduced and padded cores of each sampled hypergraph and comparing
/// degree histograms against the analytic laws. Aggregation order is fixed
/// by trial index regardless of worker scheduling, so the result is
/// deterministic for a fixed config.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// Deterministic JSON serialization (schema_version 1).
std::string to_json(const ExperimentResult& result);

/// CSV export: one row per (trial, j) histogram entry.
void write_csv(const ExperimentResult& result, std::ostream& out);

struct ScanRow {
  double d = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
};

struct CrossingScan {
  unsigned r = 0;
  std::vector<ScanRow> rows;
  /// Sign changes of beta - gamma, bisected to 1e-8 in d.
  std::vector<double> crossings;
  std::vector<std::pair<double, double>> brackets;
};

/// Evaluates beta - gamma over the grid and brackets every sign change.
CrossingScan crossing_scan(unsigned r, std::span<const double> d_grid,
                           double solver_tol = 1e-12);

}  // namespace loosecore
