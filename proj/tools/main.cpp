// gps: phase retrieval via graph projection splitting.

#include <CLI11.hpp>
#include <cstdio>
#include <limits>

#include "cli_util.hpp"
#include "gps/diagnostics.hpp"
#include "gps/experiments.hpp"
#include "gps/io.hpp"
#include "gps/model.hpp"
#include "gps/solvers.hpp"

namespace {

using namespace gps;

struct CommonOpts {
  std::uint64_t seed = 1;
  std::string output;
  int threads = 0;
  bool quiet = false;
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool output_required) {
  cmd->add_option("--seed", opts.seed, "base RNG seed");
  auto* out = cmd->add_option("--output", opts.output, "output file");
  if (output_required) out->required();
  cmd->add_option("--threads", opts.threads,
                  "worker threads (0 = all cores)");
  cmd->add_flag("--quiet", opts.quiet, "suppress config echo and summary");
}

void echo(const CommonOpts& opts, const std::string& line) {
  if (!opts.quiet) std::printf("config: %s\n", line.c_str());
}

experiments::Format parse_format(const std::string& name) {
  if (name == "csv") return experiments::Format::csv;
  if (name == "jsonl" || name == "json-lines") {
    return experiments::Format::json_lines;
  }
  throw ConfigError("unknown format: " + name);
}

model::FieldKind parse_field(const std::string& name) {
  if (name == "real") return model::FieldKind::real;
  if (name == "complex") return model::FieldKind::complex;
  throw ConfigError("unknown field: " + name);
}

model::PriorSpec parse_prior(const std::string& name) {
  if (name == "none") return model::PriorSpec::none();
  if (name == "real") return model::PriorSpec::indicator({}, true, false);
  if (name == "nonneg") return model::PriorSpec::indicator({}, false, true);
  if (name == "real-nonneg") return model::PriorSpec::indicator({}, true, true);
  throw ConfigError("unknown prior: " + name);
}

std::string algo_list_names(const std::vector<solvers::Algorithm>& algos) {
  std::string s;
  for (std::size_t i = 0; i < algos.size(); ++i) {
    if (i) s += ',';
    s += solvers::algorithm_name(algos[i]);
  }
  return s;
}

// --- solve ---

struct SolveOpts {
  CommonOpts common;
  std::string matrix_path, amplitudes_path, truth_path;
  std::string algo = "rgps";
  std::string stop = "residual";
  std::string prior = "none";
  double t = 0.1;
  int max_iters = 5000;
  double tol = 1e-3;
};

int run_solve(const SolveOpts& o) {
  const auto loaded = io::load_matrix(o.matrix_path);
  const auto ens = model::SamplingEnsemble::dense(loaded.matrix, loaded.field);
  const auto amps = io::load_vector(o.amplitudes_path);
  if (amps.field != model::FieldKind::real) {
    throw ConfigError("amplitude files must be real-valued");
  }

  model::ProblemInstance inst;
  inst.ensemble = ens;
  inst.amplitudes = amps.as_real();
  for (double b : inst.amplitudes) {
    if (b < 0.0) throw ConfigError("amplitudes must be nonnegative");
  }
  if (!o.truth_path.empty()) {
    inst.truth = io::load_vector(o.truth_path).data;
  }
  inst.seed = o.common.seed;

  solvers::SolverConfig cfg;
  cfg.algorithm = solvers::algorithm_from_name(o.algo);
  if (cfg.algorithm == solvers::Algorithm::gps_tv ||
      cfg.algorithm == solvers::Algorithm::hio) {
    throw ConfigError("solve supports gps, rgps, dr, rdr on matrix files");
  }
  cfg.t = o.t;
  cfg.max_iters = o.max_iters;
  cfg.tol = o.tol;
  cfg.seed = o.common.seed;
  cfg.stop_rule = o.stop == "oracle" ? solvers::StopRule::oracle_rel_err
                                     : solvers::StopRule::residual;
  if (o.stop != "oracle" && o.stop != "residual") {
    throw ConfigError("unknown stop rule: " + o.stop);
  }

  echo(o.common,
       "subcommand=solve matrix=" + o.matrix_path +
           " amplitudes=" + o.amplitudes_path +
           (o.truth_path.empty() ? "" : " truth=" + o.truth_path) +
           " algo=" + o.algo + " t=" + io::format_double(o.t) +
           " max-iters=" + std::to_string(o.max_iters) +
           " tol=" + io::format_double(o.tol) + " stop=" + o.stop +
           " prior=" + o.prior + " seed=" + std::to_string(o.common.seed) +
           " output=" + o.common.output);

  const auto res = solvers::run(inst, cfg, parse_prior(o.prior));
  if (res.trace.status == solvers::Trace::Status::error) {
    throw NumericalError("solver failed: " + res.trace.message);
  }

  io::save_vector(o.common.output, res.x);
  res.trace.export_csv(o.common.output + ".trace.csv");
  if (!o.common.quiet) {
    const auto& last = res.trace.records.back();
    std::printf("status=%s iters=%d residual=%s rel_err=%s\n",
                res.trace.status == solvers::Trace::Status::converged
                    ? "converged"
                    : "max_iters",
                last.iter, io::format_double(last.residual).c_str(),
                io::format_double(last.rel_err).c_str());
  }
  return 0;
}

// --- experiment subcommands ---

struct PtOpts {
  CommonOpts common;
  int n = 64;
  std::string ratios, format = "csv";
  int m = 0;
  int trials = 10;
  std::string field = "real";
  std::string algos = "gps,rgps,dr,rdr";
  int max_iters = 5000;
  double tol = 1e-3;
  double t = 0.1;
};

experiments::ExperimentGrid make_grid(const PtOpts& o) {
  experiments::ExperimentGrid grid;
  grid.n = o.n;
  if (!o.ratios.empty() && o.m > 0) {
    throw ConfigError("give either --ratios or --m, not both");
  }
  if (!o.ratios.empty()) {
    grid.m_ratios = cli::parse_ratio_range(o.ratios);
  } else if (o.m > 0) {
    grid.m_ratios = {static_cast<double>(o.m) / o.n};
  } else {
    throw ConfigError("one of --ratios or --m is required");
  }
  grid.trials = o.trials;
  grid.algorithms = cli::parse_algorithms(o.algos);
  grid.field = parse_field(o.field);
  grid.base_seed = o.common.seed;
  grid.max_iters = o.max_iters;
  grid.tol = o.tol;
  grid.t = o.t;
  return grid;
}

int run_phase_transition(const PtOpts& o) {
  const auto grid = make_grid(o);
  echo(o.common,
       "subcommand=phase-transition n=" + std::to_string(o.n) +
           " ratios=" + cli::join_doubles(grid.m_ratios) +
           " trials=" + std::to_string(o.trials) + " field=" + o.field +
           " algos=" + algo_list_names(grid.algorithms) +
           " max-iters=" + std::to_string(o.max_iters) +
           " tol=" + io::format_double(o.tol) +
           " t=" + io::format_double(o.t) +
           " seed=" + std::to_string(o.common.seed) +
           " threads=" + std::to_string(o.common.threads) +
           " format=" + o.format + " output=" + o.common.output);
  const auto table = experiments::phase_transition(grid, o.common.threads);
  experiments::emit(table, o.common.output, parse_format(o.format));
  if (!o.common.quiet) {
    std::printf("wrote %zu rows to %s\n", table.rows.size(),
                o.common.output.c_str());
  }
  return 0;
}

struct NoiseOpts {
  PtOpts base;
  std::string snrs = "10,15,20,25,30,35,40,45,50";
};

int run_noise_sweep(const NoiseOpts& o) {
  PtOpts pt = o.base;
  pt.max_iters = pt.max_iters > 0 ? pt.max_iters : 200;
  auto grid = make_grid(pt);
  grid.snr_list = cli::parse_double_list(o.snrs);
  if (grid.m_ratios.size() != 1) {
    throw ConfigError("noise-sweep expects a single ratio or --m");
  }
  echo(o.base.common,
       "subcommand=noise-sweep n=" + std::to_string(pt.n) +
           " ratio=" + cli::join_doubles(grid.m_ratios) + " snrs=" +
           cli::join_doubles(grid.snr_list) + " trials=" +
           std::to_string(pt.trials) + " field=" + pt.field + " algos=" +
           algo_list_names(grid.algorithms) + " max-iters=" +
           std::to_string(grid.max_iters) + " t=" + io::format_double(pt.t) +
           " seed=" + std::to_string(pt.common.seed) + " threads=" +
           std::to_string(pt.common.threads) + " output=" + pt.common.output);
  const auto table = experiments::noise_sweep(grid, pt.common.threads);
  experiments::emit(table, pt.common.output, parse_format(pt.format));
  if (!pt.common.quiet) {
    std::printf("wrote %zu rows to %s\n", table.rows.size(),
                pt.common.output.c_str());
  }
  return 0;
}

struct SparseOpts {
  CommonOpts common;
  int n = 100;
  std::string s_list = "5,10,20";
  std::string p_list;
  std::string variant = "l1";
  int trials = 10;
  std::string format = "csv";
};

int run_sparse(const SparseOpts& o) {
  const std::vector<int> s = cli::parse_int_list(o.s_list);
  std::vector<double> p;
  if (!o.p_list.empty()) {
    p = cli::parse_double_list(o.p_list);
  } else {
    for (int v : s) p.push_back(static_cast<double>(v));  // p = s scaling
  }
  experiments::SparseVariant variant;
  if (o.variant == "l1") {
    variant = experiments::SparseVariant::l1;
  } else if (o.variant == "l0") {
    variant = experiments::SparseVariant::l0;
  } else {
    throw ConfigError("variant must be l1 or l0");
  }
  echo(o.common, "subcommand=sparse n=" + std::to_string(o.n) + " s=" +
                     o.s_list + " p=" + cli::join_doubles(p) + " variant=" +
                     o.variant + " trials=" + std::to_string(o.trials) +
                     " seed=" + std::to_string(o.common.seed) + " threads=" +
                     std::to_string(o.common.threads) +
                     " output=" + o.common.output);
  const auto table = experiments::sparse_experiment(
      o.n, s, p, o.trials, variant, o.common.seed, o.common.threads);
  experiments::emit(table, o.common.output, parse_format(o.format));
  if (!o.common.quiet) {
    std::printf("wrote %zu rows to %s\n", table.rows.size(),
                o.common.output.c_str());
  }
  return 0;
}

struct TvOpts {
  CommonOpts common;
  int height = 16, width = 16, pad = 2, blocks = 4;
  std::string snrs = "inf,30";
  int trials = 10;
  double tv_weight = 0.01;
  int hio_iters = 1000;
  int rgps_iters = 30;
  double t = 0.1;
  std::string format = "csv";
};

int run_tv(const TvOpts& o) {
  experiments::PhantomSpec phantom;
  phantom.height = o.height;
  phantom.width = o.width;
  phantom.blocks = o.blocks;
  phantom.seed = mix_seed(o.common.seed, 0x9e);
  experiments::TvConfig cfg;
  cfg.pad_factor = o.pad;
  cfg.hio_iters = o.hio_iters;
  cfg.rgps_iters = o.rgps_iters;
  cfg.t = o.t;
  cfg.tv_weight = o.tv_weight;
  const auto snrs = cli::parse_double_list(o.snrs);
  echo(o.common,
       "subcommand=tv h=" + std::to_string(o.height) + " w=" +
           std::to_string(o.width) + " pad=" + std::to_string(o.pad) +
           " blocks=" + std::to_string(o.blocks) + " snrs=" +
           cli::join_doubles(snrs) + " trials=" + std::to_string(o.trials) +
           " tv-weight=" + io::format_double(o.tv_weight) + " hio-iters=" +
           std::to_string(o.hio_iters) + " rgps-iters=" +
           std::to_string(o.rgps_iters) + " t=" + io::format_double(o.t) +
           " seed=" + std::to_string(o.common.seed) + " threads=" +
           std::to_string(o.common.threads) + " output=" + o.common.output);
  const auto table = experiments::tv_experiment(
      phantom, snrs, o.trials, cfg, o.common.seed, o.common.threads);
  experiments::emit(table, o.common.output, parse_format(o.format));
  if (!o.common.quiet) {
    std::printf("wrote %zu rows to %s\n", table.rows.size(),
                o.common.output.c_str());
  }
  return 0;
}

struct SpectralOpts {
  CommonOpts common;
  int n = 8, m = 32;
  std::string field = "complex";
  double t = 0.1;
};

int run_spectral(const SpectralOpts& o) {
  echo(o.common, "subcommand=spectral n=" + std::to_string(o.n) + " m=" +
                     std::to_string(o.m) + " field=" + o.field +
                     " t=" + io::format_double(o.t) +
                     " seed=" + std::to_string(o.common.seed) +
                     (o.common.output.empty() ? ""
                                              : " output=" + o.common.output));
  const auto inst =
      model::gen_gaussian(o.n, o.m, parse_field(o.field), o.common.seed);
  const auto rep =
      diagnostics::contraction_constants(inst.ensemble, *inst.truth);
  std::printf("%s\n", rep.to_json().c_str());
  if (o.t >= rep.t_max) {
    std::printf("warning: t=%s is outside the admissible range (t_max=%s)\n",
                io::format_double(o.t).c_str(),
                io::format_double(rep.t_max).c_str());
  }
  if (!o.common.output.empty()) {
    experiments::Table table;
    table.columns = {"delta1", "delta2",  "sigma2",  "beta_tilde", "t_max",
                     "s_min_A", "s_max_A", "ranges_ok"};
    table.add_row({rep.delta1, rep.delta2, rep.sigma2, rep.beta_tilde,
                   rep.t_max, rep.s_min_a, rep.s_max_a,
                   static_cast<std::int64_t>(rep.ranges_ok ? 1 : 0)});
    experiments::emit(table, o.common.output, experiments::Format::csv);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"phase retrieval solvers built on graph projection splitting"};
  app.require_subcommand(1);

  SolveOpts solve;
  auto* cmd_solve =
      app.add_subcommand("solve", "solve one instance from matrix files");
  cmd_solve->add_option("--matrix", solve.matrix_path, "sampling matrix A")
      ->required();
  cmd_solve
      ->add_option("--amplitudes", solve.amplitudes_path, "amplitude vector b")
      ->required();
  cmd_solve->add_option("--truth", solve.truth_path,
                        "optional ground truth for oracle stopping");
  cmd_solve->add_option("--algo", solve.algo, "gps|rgps|dr|rdr");
  cmd_solve->add_option("--t", solve.t, "relaxation parameter");
  cmd_solve->add_option("--max-iters", solve.max_iters, "iteration budget");
  cmd_solve->add_option("--tol", solve.tol, "stopping tolerance");
  cmd_solve->add_option("--stop", solve.stop, "residual|oracle");
  cmd_solve->add_option("--prior", solve.prior,
                        "none|real|nonneg|real-nonneg");
  add_common(cmd_solve, solve.common, true);

  PtOpts pt;
  auto* cmd_pt = app.add_subcommand("phase-transition",
                                    "success-rate grid over m/n ratios");
  cmd_pt->add_option("--n", pt.n, "signal length");
  cmd_pt->add_option("--ratios", pt.ratios, "a:step:b measurement ratios");
  cmd_pt->add_option("--m", pt.m, "absolute measurement count");
  cmd_pt->add_option("--trials", pt.trials, "trials per cell");
  cmd_pt->add_option("--field", pt.field, "real|complex");
  cmd_pt->add_option("--algos", pt.algos, "comma-separated algorithms");
  cmd_pt->add_option("--max-iters", pt.max_iters, "iteration budget");
  cmd_pt->add_option("--tol", pt.tol, "success tolerance");
  cmd_pt->add_option("--t", pt.t, "relaxation for robust variants");
  cmd_pt->add_option("--format", pt.format, "csv|jsonl");
  add_common(cmd_pt, pt.common, true);

  NoiseOpts noise;
  noise.base.algos = "gps,rgps";
  noise.base.max_iters = 200;
  auto* cmd_noise =
      app.add_subcommand("noise-sweep", "median error across SNR levels");
  cmd_noise->add_option("--n", noise.base.n, "signal length");
  cmd_noise->add_option("--ratios", noise.base.ratios, "single ratio a:step:b");
  cmd_noise->add_option("--m", noise.base.m, "absolute measurement count");
  cmd_noise->add_option("--snrs", noise.snrs, "comma-separated SNR dB list");
  cmd_noise->add_option("--trials", noise.base.trials, "trials per cell");
  cmd_noise->add_option("--field", noise.base.field, "real|complex");
  cmd_noise->add_option("--algos", noise.base.algos, "algorithms");
  cmd_noise->add_option("--max-iters", noise.base.max_iters,
                        "iteration budget");
  cmd_noise->add_option("--t", noise.base.t, "relaxation");
  cmd_noise->add_option("--format", noise.base.format, "csv|jsonl");
  add_common(cmd_noise, noise.base.common, true);

  SparseOpts sparse;
  auto* cmd_sparse =
      app.add_subcommand("sparse", "sparse recovery with m = n");
  cmd_sparse->add_option("--n", sparse.n, "signal length");
  cmd_sparse->add_option("--s", sparse.s_list, "sparsity levels");
  cmd_sparse->add_option("--p", sparse.p_list,
                         "soft thresholds (default: p = s)");
  cmd_sparse->add_option("--variant", sparse.variant, "l1|l0");
  cmd_sparse->add_option("--trials", sparse.trials, "trials per level");
  cmd_sparse->add_option("--format", sparse.format, "csv|jsonl");
  add_common(cmd_sparse, sparse.common, true);

  TvOpts tv;
  auto* cmd_tv =
      app.add_subcommand("tv", "HIO baseline plus TV-regularized refinement");
  cmd_tv->add_option("--height", tv.height, "phantom height");
  cmd_tv->add_option("--width", tv.width, "phantom width");
  cmd_tv->add_option("--pad", tv.pad, "zero-padding factor");
  cmd_tv->add_option("--blocks", tv.blocks, "phantom rectangles (0=constant)");
  cmd_tv->add_option("--snrs", tv.snrs, "SNR list; inf = noiseless");
  cmd_tv->add_option("--trials", tv.trials, "trials per level");
  cmd_tv->add_option("--tv-weight", tv.tv_weight, "l1 weight on TV block");
  cmd_tv->add_option("--hio-iters", tv.hio_iters, "HIO iterations");
  cmd_tv->add_option("--rgps-iters", tv.rgps_iters, "refinement iterations");
  cmd_tv->add_option("--t", tv.t, "relaxation");
  cmd_tv->add_option("--format", tv.format, "csv|jsonl");
  add_common(cmd_tv, tv.common, true);

  SpectralOpts spectral;
  auto* cmd_spectral = app.add_subcommand(
      "spectral", "convergence diagnostics for a random instance");
  cmd_spectral->add_option("--n", spectral.n, "signal length");
  cmd_spectral->add_option("--m", spectral.m, "measurement count");
  cmd_spectral->add_option("--field", spectral.field, "real|complex");
  cmd_spectral->add_option("--t", spectral.t, "relaxation to check");
  add_common(cmd_spectral, spectral.common, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (cmd_solve->parsed()) return run_solve(solve);
    if (cmd_pt->parsed()) return run_phase_transition(pt);
    if (cmd_noise->parsed()) return run_noise_sweep(noise);
    if (cmd_sparse->parsed()) return run_sparse(sparse);
    if (cmd_tv->parsed()) return run_tv(tv);
    if (cmd_spectral->parsed()) return run_spectral(spectral);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 1;
}
