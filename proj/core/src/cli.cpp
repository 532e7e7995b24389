#include "loosecore/cli.hpp"

#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "loosecore/analytic.hpp"
#include "loosecore/cores.hpp"
#include "loosecore/errors.hpp"
#include "loosecore/experiment.hpp"
#include "loosecore/extremal.hpp"
#include "loosecore/hypergraph.hpp"

namespace loosecore {

namespace {

using ordered_json = nlohmann::ordered_json;

// Writes to --out when given, stdout otherwise.
void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw IoError("cannot open for writing: " + out_path);
  out << text;
  if (!out) throw IoError("write failed: " + out_path);
}

std::string format_double(double x) {
  std::ostringstream s;
  s << std::setprecision(15) << x;
  return s.str();
}

ordered_json params_json(const AnalyticParams& p) {
  ordered_json j;
  j["r"] = p.r;
  j["d"] = p.d;
  j["d_star"] = p.d_star;
  j["regime"] = p.at_threshold ? "at-threshold"
                               : (p.supercritical ? "supercritical" : "subcritical");
  j["rho_star"] = p.rho_star;
  j["rho_hat_star"] = p.rho_hat_star;
  j["eta"] = p.eta;
  j["alpha"] = p.alpha;
  j["beta"] = p.beta;
  j["gamma"] = p.gamma;
  const CycleBound bound = cycle_bound_coeff(p.r, p.d);
  j["cycle_bound"] = bound.coefficient;
  j["cycle_bound_side"] = bound.side == BoundSide::beta
                              ? "beta"
                              : (bound.side == BoundSide::gamma ? "gamma" : "tie");
  j["solver_tolerance"] = p.tolerance;
  j["solver_iterations"] = p.iterations;
  return j;
}

std::string predict_text(const AnalyticParams& p) {
  std::ostringstream out;
  auto row = [&](const std::string& name, const std::string& value) {
    out << std::left << std::setw(16) << name << value << '\n';
  };
  row("r", std::to_string(p.r));
  row("d", format_double(p.d));
  row("d_star", format_double(p.d_star));
  std::string regime = p.at_threshold ? "at-threshold (rho_star = 0 by convention)"
                       : p.supercritical ? "supercritical"
                                         : "subcritical";
  row("regime", regime);
  row("rho_star", format_double(p.rho_star));
  row("rho_hat_star", format_double(p.rho_hat_star));
  row("eta", format_double(p.eta));
  row("alpha", format_double(p.alpha));
  row("beta", format_double(p.beta));
  row("gamma", format_double(p.gamma));
  const CycleBound bound = cycle_bound_coeff(p.r, p.d);
  std::string side = bound.side == BoundSide::beta
                         ? "beta"
                         : (bound.side == BoundSide::gamma ? "gamma" : "tie");
  row("cycle_bound", format_double(bound.coefficient) + " (" + side + ")");
  row("solver_tol", format_double(p.tolerance));
  return out.str();
}

struct CommonModelOpts {
  unsigned r = 3;
  std::uint32_t n = 1000;
  double d = 1.0;
  double p = -1.0;  // explicit probability when >= 0
  std::uint64_t seed = 0;

  ModelParams build() const {
    return p >= 0.0 ? ModelParams::from_probability(r, n, p, seed)
                    : ModelParams::from_degree(r, n, d, seed);
  }
};

void add_model_options(CLI::App* cmd, CommonModelOpts& opts) {
  cmd->add_option("-r,--uniformity", opts.r, "edge size r");
  cmd->add_option("-n,--vertices", opts.n, "vertex count");
  cmd->add_option("-d,--degree", opts.d, "expected vertex degree d");
  cmd->add_option("-p,--probability", opts.p, "explicit edge probability");
  cmd->add_option("--seed", opts.seed, "RNG seed");
}

int run_generate(const CommonModelOpts& model, const std::string& out_path) {
  const Hypergraph h = sample_hypergraph(model.build());
  std::ostringstream text;
  save_hypergraph(h, text);
  emit(out_path, text.str());
  std::cerr << "sampled " << h.edge_count() << " edges on " << h.vertex_count()
            << " vertices\n";
  return 0;
}

struct CoreOpts {
  CommonModelOpts model;
  std::string in_path;
  std::string rounds_csv;
  std::string mode = "sync";
  std::string out_path;
  bool json = false;
};

int run_core(const CoreOpts& opts) {
  const Hypergraph h = opts.in_path.empty()
                           ? sample_hypergraph(opts.model.build())
                           : load_hypergraph_file(opts.in_path);
  const FactorGraph g = FactorGraph::from_hypergraph(h);
  const PeelMode mode =
      opts.mode == "queue" ? PeelMode::queue : PeelMode::synchronous;
  const CoreResult reduced = reduced_core(g, mode);
  const CoreResult padded = padded_core_from_reduced(g, reduced);

  std::size_t core_vertices = 0;
  for (std::uint32_t v = 0; v < g.variable_count(); ++v) {
    if (padded.padded_variable_degree[v] > 0) ++core_vertices;
  }
  const std::size_t cert = certificate_bound(g, reduced);
  const double n = g.variable_count();

  if (opts.json) {
    ordered_json j;
    j["r"] = h.uniformity();
    j["n"] = h.vertex_count();
    j["m"] = h.edge_count();
    j["mode"] = opts.mode;
    if (reduced.has_rounds) j["rounds_to_fixpoint"] = reduced.rounds_to_fixpoint;
    j["reduced_nonisolated_variables"] = reduced.nonisolated_variables;
    j["reduced_nonisolated_factors"] = reduced.nonisolated_factors;
    j["reduced_edges"] = reduced.reduced_edge_count;
    j["core_order"] = core_vertices;
    j["core_order_fraction"] = core_vertices / n;
    j["core_size"] = reduced.nonisolated_factors;
    j["core_size_fraction"] = reduced.nonisolated_factors / n;
    j["certificate_bound"] = cert;
    emit(opts.out_path, j.dump(2) + "\n");
  } else {
    std::ostringstream out;
    out << "r=" << h.uniformity() << " n=" << h.vertex_count()
        << " m=" << h.edge_count() << '\n';
    if (reduced.has_rounds) {
      out << "rounds_to_fixpoint  " << reduced.rounds_to_fixpoint << '\n';
    }
    out << "reduced core        vars=" << reduced.nonisolated_variables
        << " factors=" << reduced.nonisolated_factors
        << " edges=" << reduced.reduced_edge_count << '\n';
    out << "loose core          v=" << core_vertices
        << " (v/n=" << format_double(core_vertices / n) << ")"
        << " e=" << reduced.nonisolated_factors
        << " (e/n=" << format_double(reduced.nonisolated_factors / n) << ")\n";
    out << "certificate bound   " << cert << '\n';
    emit(opts.out_path, out.str());
  }

  if (!opts.rounds_csv.empty()) {
    if (!reduced.has_rounds) {
      throw InvalidParams("--rounds-csv requires --mode sync");
    }
    std::ofstream csv(opts.rounds_csv);
    if (!csv) throw IoError("cannot open for writing: " + opts.rounds_csv);
    write_disabling_csv(reduced, csv);
  }
  return 0;
}

struct PredictOpts {
  unsigned r = 3;
  double d = 1.0;
  double tol = 1e-12;
  bool json = false;
  std::string out_path;
};

int run_predict(const PredictOpts& opts) {
  const AnalyticParams params = derived_params(opts.r, opts.d, opts.tol);
  if (opts.json) {
    emit(opts.out_path, params_json(params).dump(2) + "\n");
  } else {
    emit(opts.out_path, predict_text(params));
  }
  return 0;
}

struct ExperimentOpts {
  std::string config_path;
  ExperimentConfig cfg;
};

int run_experiment_cmd(const ExperimentConfig& cfg) {
  const ExperimentResult result = run_experiment(cfg);
  double total_seconds = 0.0;
  for (const auto& t : result.trials) total_seconds += t.seconds;
  if (cfg.format == "csv") {
    std::ostringstream out;
    write_csv(result, out);
    emit(cfg.out, out.str());
  } else {
    emit(cfg.out, to_json(result));
  }
  std::cerr << result.trials.size() << " trial(s) in " << std::setprecision(3)
            << total_seconds << "s\n";
  if (result.partial) {
    std::cerr << "warning: partial results (" << result.error << ")\n";
    return 1;
  }
  return 0;
}

struct ExtremalOpts {
  CommonModelOpts model;
  std::string in_path;
  std::size_t planted_cycle = 0;
  std::size_t cap = kDefaultExtremalEdgeCap;
  bool json = false;
  std::string out_path;
};

int run_extremal(const ExtremalOpts& opts) {
  Hypergraph h = [&]() {
    if (!opts.in_path.empty()) return load_hypergraph_file(opts.in_path);
    if (opts.planted_cycle > 0) {
      return make_loose_cycle(opts.model.r, opts.planted_cycle);
    }
    return sample_hypergraph(opts.model.build());
  }();

  const std::size_t longest_path = brute_force_longest_path(h, opts.cap);
  const std::size_t longest_cycle = brute_force_longest_cycle(h, opts.cap);
  const FactorGraph g = FactorGraph::from_hypergraph(h);
  const CoreResult reduced = reduced_core(g, PeelMode::synchronous);
  const std::size_t cert = certificate_bound(g, reduced);

  if (opts.json) {
    ordered_json j;
    j["r"] = h.uniformity();
    j["n"] = h.vertex_count();
    j["m"] = h.edge_count();
    j["longest_loose_path"] = longest_path;
    j["longest_loose_cycle"] = longest_cycle;
    j["certificate_bound"] = cert;
    j["cycle_within_certificate"] = longest_cycle <= cert;
    j["path_cycle_relation_holds"] =
        longest_path + 1 >= longest_cycle;
    emit(opts.out_path, j.dump(2) + "\n");
  } else {
    std::ostringstream out;
    out << "r=" << h.uniformity() << " n=" << h.vertex_count()
        << " m=" << h.edge_count() << '\n'
        << "longest loose path   " << longest_path << '\n'
        << "longest loose cycle  " << longest_cycle << '\n'
        << "certificate bound    " << cert
        << (longest_cycle <= cert ? "  (sound)" : "  (VIOLATED)") << '\n';
    emit(opts.out_path, out.str());
  }
  return 0;
}

struct ScanOpts {
  unsigned r = 4;
  double d_min = 0.0;  // 0 = d_star + step
  double d_max = 10.0;
  double step = 0.1;
  bool json = false;
  std::string out_path;
};

int run_scan(const ScanOpts& opts) {
  if (!(opts.step > 0.0)) throw InvalidParams("step must be positive");
  const double d_star = 1.0 / (opts.r - 1);
  const double start = opts.d_min > 0.0 ? opts.d_min : d_star + opts.step;
  std::vector<double> grid;
  for (double d = start; d <= opts.d_max + 1e-12; d += opts.step) {
    grid.push_back(d);
  }
  const CrossingScan scan = crossing_scan(opts.r, grid);

  if (opts.json) {
    ordered_json j;
    j["r"] = opts.r;
    j["d_star"] = d_star;
    ordered_json rows = ordered_json::array();
    for (const auto& row : scan.rows) {
      ordered_json jr;
      jr["d"] = row.d;
      jr["beta"] = row.beta;
      jr["gamma"] = row.gamma;
      jr["diff"] = row.beta - row.gamma;
      rows.push_back(std::move(jr));
    }
    j["rows"] = std::move(rows);
    j["crossings"] = scan.crossings;
    emit(opts.out_path, j.dump(2) + "\n");
  } else {
    std::ostringstream out;
    out << "r=" << opts.r << " d_star=" << format_double(d_star) << '\n';
    out << std::left << std::setw(12) << "d" << std::setw(22) << "beta"
        << std::setw(22) << "gamma" << "beta-gamma" << '\n';
    for (const auto& row : scan.rows) {
      out << std::left << std::setw(12) << format_double(row.d) << std::setw(22)
          << format_double(row.beta) << std::setw(22) << format_double(row.gamma)
          << format_double(row.beta - row.gamma) << '\n';
    }
    if (scan.crossings.empty()) {
      out << "no sign change of beta-gamma on the grid\n";
    } else {
      for (double c : scan.crossings) {
        out << "sign change near d = " << format_double(c) << '\n';
      }
    }
    emit(opts.out_path, out.str());
  }
  return 0;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"loose-core structure of random r-uniform hypergraphs"};
  app.require_subcommand(1);

  // generate
  auto gen_model = std::make_shared<CommonModelOpts>();
  auto gen_out = std::make_shared<std::string>();
  CLI::App* generate = app.add_subcommand("generate", "sample a hypergraph");
  add_model_options(generate, *gen_model);
  generate->add_option("--out", *gen_out, "output file (default stdout)");

  // core
  auto core_opts = std::make_shared<CoreOpts>();
  CLI::App* core = app.add_subcommand("core", "extract core statistics");
  add_model_options(core, core_opts->model);
  core->add_option("--in", core_opts->in_path, "load hypergraph from file");
  core->add_option("--mode", core_opts->mode, "peeling mode: sync or queue")
      ->check(CLI::IsMember({"sync", "queue"}));
  core->add_option("--rounds-csv", core_opts->rounds_csv,
                   "write per-node disabling rounds CSV");
  core->add_flag("--json", core_opts->json, "JSON output");
  core->add_option("--out", core_opts->out_path, "output file (default stdout)");

  // predict
  auto predict_opts = std::make_shared<PredictOpts>();
  CLI::App* predict = app.add_subcommand("predict", "analytic parameter table");
  predict->add_option("-r,--uniformity", predict_opts->r, "edge size r");
  predict->add_option("-d,--degree", predict_opts->d, "expected vertex degree d");
  predict->add_option("--tol", predict_opts->tol, "solver tolerance");
  predict->add_flag("--json", predict_opts->json, "JSON output");
  predict->add_option("--out", predict_opts->out_path,
                      "output file (default stdout)");

  // experiment
  auto exp_opts = std::make_shared<ExperimentOpts>();
  CLI::App* experiment =
      app.add_subcommand("experiment", "Monte Carlo experiment");
  experiment->add_option("--config", exp_opts->config_path,
                         "key = value config file");
  auto exp_r = experiment->add_option("-r,--uniformity", "edge size r");
  auto exp_n = experiment->add_option("-n,--vertices", "vertex count");
  auto exp_d = experiment->add_option("-d,--degree", "expected vertex degree d");
  auto exp_p = experiment->add_option("-p,--probability", "explicit edge probability");
  auto exp_trials = experiment->add_option("--trials", "number of trials");
  auto exp_seed = experiment->add_option("--seed", "base seed");
  auto exp_ell = experiment->add_option("--ell", "record histograms after this round");
  auto exp_maxdeg = experiment->add_option("-J,--max-degree", "histogram degree cap");
  auto exp_threads = experiment->add_option("--threads", "parallel trial workers");
  auto exp_out = experiment->add_option("--out", "output file (default stdout)");
  auto exp_csv = experiment->add_flag("--csv", "CSV output instead of JSON");
  auto exp_json = experiment->add_flag("--json", "JSON output (default)");

  // extremal
  auto ext_opts = std::make_shared<ExtremalOpts>();
  CLI::App* extremal =
      app.add_subcommand("extremal", "brute-force loose path/cycle oracle");
  ext_opts->model.n = 12;  // exhaustive search wants tiny instances
  ext_opts->model.d = 2.0;
  add_model_options(extremal, ext_opts->model);
  extremal->add_option("--in", ext_opts->in_path, "load hypergraph from file");
  extremal->add_option("--planted-cycle", ext_opts->planted_cycle,
                       "use a planted loose cycle of this length");
  extremal->add_option("--cap", ext_opts->cap, "maximum edge count for search");
  extremal->add_flag("--json", ext_opts->json, "JSON output");
  extremal->add_option("--out", ext_opts->out_path,
                       "output file (default stdout)");

  // scan
  auto scan_opts = std::make_shared<ScanOpts>();
  CLI::App* scan = app.add_subcommand("scan", "beta/gamma crossing scan");
  scan->add_option("-r,--uniformity", scan_opts->r, "edge size r");
  scan->add_option("--d-min", scan_opts->d_min, "grid start (default d_star+step)");
  scan->add_option("--d-max", scan_opts->d_max, "grid end");
  scan->add_option("--step", scan_opts->step, "grid step");
  scan->add_flag("--json", scan_opts->json, "JSON output");
  scan->add_option("--out", scan_opts->out_path, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (generate->parsed()) return run_generate(*gen_model, *gen_out);
    if (core->parsed()) return run_core(*core_opts);
    if (predict->parsed()) return run_predict(*predict_opts);
    if (experiment->parsed()) {
      ExperimentConfig cfg;
      if (!exp_opts->config_path.empty()) {
        cfg = ExperimentConfig::from_file(exp_opts->config_path);
      }
      // flags override file values
      if (exp_r->count()) cfg.apply("r", exp_r->as<std::string>());
      if (exp_n->count()) cfg.apply("n", exp_n->as<std::string>());
      if (exp_d->count()) cfg.apply("d", exp_d->as<std::string>());
      if (exp_p->count()) cfg.apply("p", exp_p->as<std::string>());
      if (exp_trials->count()) cfg.apply("trials", exp_trials->as<std::string>());
      if (exp_seed->count()) cfg.apply("seed", exp_seed->as<std::string>());
      if (exp_ell->count()) cfg.apply("ell", exp_ell->as<std::string>());
      if (exp_maxdeg->count()) cfg.apply("max_degree", exp_maxdeg->as<std::string>());
      if (exp_threads->count()) cfg.apply("threads", exp_threads->as<std::string>());
      if (exp_out->count()) cfg.out = exp_out->as<std::string>();
      if (exp_csv->count()) cfg.format = "csv";
      if (exp_json->count()) cfg.format = "json";
      return run_experiment_cmd(cfg);
    }
    if (extremal->parsed()) return run_extremal(*ext_opts);
    if (scan->parsed()) return run_scan(*scan_opts);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

int cli_main(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  return cli_main(static_cast<int>(argv.size()), argv.data());
}

}  // namespace loosecore
