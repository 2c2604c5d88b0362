#include "gps/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>
#include <thread>

#include "gps/graph_projection.hpp"
#include "gps/io.hpp"

namespace gps::experiments {

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != columns.size()) {
    throw ConfigError("table row width mismatch");
  }
  rows.push_back(std::move(row));
}

namespace {

std::string cell_to_string(const Table::Cell& cell) {
  if (const auto* i = std::get_if<std::int64_t>(&cell)) {
    return std::to_string(*i);
  }
  if (const auto* d = std::get_if<double>(&cell)) {
    return io::format_double(*d);
  }
  return std::get<std::string>(cell);
}

std::string cell_to_json(const Table::Cell& cell) {
  if (std::holds_alternative<std::string>(cell)) {
    return "\"" + std::get<std::string>(cell) + "\"";
  }
  const std::string s = cell_to_string(cell);
  if (s.find("inf") != std::string::npos || s.find("nan") != std::string::npos) {
    return "\"" + s + "\"";  // JSON has no literals for these
  }
  return s;
}

Table::Cell parse_cell(const std::string& field) {
  if (!field.empty()) {
    std::int64_t iv = 0;
    auto [p, ec] = std::from_chars(field.data(), field.data() + field.size(), iv);
    if (ec == std::errc() && p == field.data() + field.size()) return iv;
    double dv = 0.0;
    auto [pd, ecd] =
        std::from_chars(field.data(), field.data() + field.size(), dv);
    if (ecd == std::errc() && pd == field.data() + field.size()) return dv;
  }
  return field;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

void emit(const Table& table, const std::string& path, Format format) {
  std::string buf;
  if (format == Format::csv) {
    for (std::size_t j = 0; j < table.columns.size(); ++j) {
      if (j) buf += ',';
      buf += table.columns[j];
    }
    buf += '\n';
    for (const auto& row : table.rows) {
      for (std::size_t j = 0; j < row.size(); ++j) {
        if (j) buf += ',';
        buf += cell_to_string(row[j]);
      }
      buf += '\n';
    }
  } else {
    for (const auto& row : table.rows) {
      buf += '{';
      for (std::size_t j = 0; j < row.size(); ++j) {
        if (j) buf += ", ";
        buf += "\"" + table.columns[j] + "\": " + cell_to_json(row[j]);
      }
      buf += "}\n";
    }
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw io::IoError(io::IoError::Kind::open, "cannot open " + path);
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) throw io::IoError(io::IoError::Kind::write, "write failed " + path);
}

Table load_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io::IoError(io::IoError::Kind::open, "cannot open " + path);
  Table t;
  std::string line;
  if (!std::getline(in, line)) {
    throw io::IoError(io::IoError::Kind::truncated, path + ": missing header");
  }
  t.columns = split_csv_line(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != t.columns.size()) {
      throw io::IoError(io::IoError::Kind::header,
                        path + ": ragged row in CSV");
    }
    std::vector<Table::Cell> row;
    row.reserve(fields.size());
    for (const auto& f : fields) row.push_back(parse_cell(f));
    t.rows.push_back(std::move(row));
  }
  return t;
}

void parallel_for(std::size_t count, int threads,
                  const std::function<void(std::size_t)>& body) {
  if (count == 0) return;
  std::size_t nthreads = threads > 0
                             ? static_cast<std::size_t>(threads)
                             : std::max(1u, std::thread::hardware_concurrency());
  nthreads = std::min(nthreads, count);
  if (nthreads <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(nthreads);
  pool.reserve(nthreads);
  for (std::size_t w = 0; w < nthreads; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = next.fetch_add(1); i < count;
             i = next.fetch_add(1)) {
          body(i);
        }
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

namespace {

double median(std::vector<double> v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const std::size_t k = v.size();
  return k % 2 ? v[k / 2] : 0.5 * (v[k / 2 - 1] + v[k / 2]);
}

double mean(const std::vector<double>& v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

struct TrialOutcome {
  double rel_err = std::numeric_limits<double>::infinity();
  int iters = 0;
  bool failed = false;
};

solvers::SolverConfig config_for(const ExperimentGrid& grid,
                                 solvers::Algorithm algo) {
  solvers::SolverConfig cfg;
  cfg.algorithm = algo;
  cfg.t = grid.t;
  cfg.max_iters = grid.max_iters;
  cfg.tol = grid.tol;
  cfg.stop_rule = solvers::StopRule::oracle_rel_err;
  return cfg;
}

}  // namespace

Table phase_transition(const ExperimentGrid& grid, int threads) {
  if (grid.trials < 1) throw ConfigError("trials must be >= 1");
  if (grid.m_ratios.empty()) throw ConfigError("no measurement ratios");
  if (grid.algorithms.empty()) throw ConfigError("no algorithms");

  const std::size_t cells = grid.m_ratios.size();
  const std::size_t tasks = cells * static_cast<std::size_t>(grid.trials);
  const std::size_t nalgo = grid.algorithms.size();
  std::vector<TrialOutcome> outcomes(tasks * nalgo);

  parallel_for(tasks, threads, [&](std::size_t task) {
    const std::size_t cell = task / grid.trials;
    const std::size_t trial = task % grid.trials;
    const int m = static_cast<int>(
        std::llround(grid.m_ratios[cell] * static_cast<double>(grid.n)));
    // cells are keyed by content, so any one cell reruns identically in
    // isolation
    const std::uint64_t key = std::bit_cast<std::uint64_t>(grid.m_ratios[cell]);
    const std::uint64_t inst_seed = mix_seed(grid.base_seed, key, trial, 0);
    const std::uint64_t init_seed = mix_seed(grid.base_seed, key, trial, 1);
    const model::ProblemInstance inst =
        model::gen_gaussian(grid.n, m, grid.field, inst_seed);
    for (std::size_t a = 0; a < nalgo; ++a) {
      TrialOutcome& out = outcomes[task * nalgo + a];
      try {
        solvers::SolverConfig cfg = config_for(grid, grid.algorithms[a]);
        cfg.seed = init_seed;
        const solvers::RunResult res = solvers::run(inst, cfg);
        out.rel_err = res.trace.records.back().rel_err;
        out.iters = res.trace.terminal_iter();
        out.failed = res.trace.status == solvers::Trace::Status::error;
      } catch (const Error&) {
        out.failed = true;
      }
    }
  });

  Table table;
  table.columns = {"field",  "algorithm",    "n",          "m",
                   "ratio",  "trials",       "success_rate", "mean_iters",
                   "median_iters"};
  for (std::size_t cell = 0; cell < cells; ++cell) {
    const int m = static_cast<int>(
        std::llround(grid.m_ratios[cell] * static_cast<double>(grid.n)));
    for (std::size_t a = 0; a < nalgo; ++a) {
      std::vector<double> iters;
      int successes = 0;
      for (int trial = 0; trial < grid.trials; ++trial) {
        const TrialOutcome& out =
            outcomes[(cell * grid.trials + trial) * nalgo + a];
        iters.push_back(static_cast<double>(out.iters));
        if (!out.failed && out.rel_err < 1e-3) ++successes;
      }
      table.add_row({
          std::string(grid.field == model::FieldKind::real ? "real"
                                                           : "complex"),
          std::string(solvers::algorithm_name(grid.algorithms[a])),
          static_cast<std::int64_t>(grid.n),
          static_cast<std::int64_t>(m),
          grid.m_ratios[cell],
          static_cast<std::int64_t>(grid.trials),
          static_cast<double>(successes) / grid.trials,
          mean(iters),
          median(iters),
      });
    }
  }
  return table;
}

Table noise_sweep(const ExperimentGrid& grid, int threads) {
  if (grid.snr_list.empty()) throw ConfigError("noise_sweep: empty snr list");
  if (grid.m_ratios.size() != 1) {
    throw ConfigError("noise_sweep: exactly one measurement ratio expected");
  }
  const int m = static_cast<int>(
      std::llround(grid.m_ratios[0] * static_cast<double>(grid.n)));
  const std::size_t cells = grid.snr_list.size();
  const std::size_t tasks = cells * static_cast<std::size_t>(grid.trials);
  const std::size_t nalgo = grid.algorithms.size();
  std::vector<TrialOutcome> outcomes(tasks * nalgo);

  parallel_for(tasks, threads, [&](std::size_t task) {
    const std::size_t cell = task / grid.trials;
    const std::size_t trial = task % grid.trials;
    const std::uint64_t key =
        std::bit_cast<std::uint64_t>(grid.snr_list[cell]);
    const std::uint64_t inst_seed = mix_seed(grid.base_seed, key, trial, 0);
    const std::uint64_t init_seed = mix_seed(grid.base_seed, key, trial, 1);
    const std::uint64_t noise_seed = mix_seed(grid.base_seed, key, trial, 2);
    model::ProblemInstance inst =
        model::gen_gaussian(grid.n, m, grid.field, inst_seed);
    inst = model::add_noise(inst, grid.snr_list[cell], noise_seed);
    for (std::size_t a = 0; a < nalgo; ++a) {
      TrialOutcome& out = outcomes[task * nalgo + a];
      try {
        solvers::SolverConfig cfg = config_for(grid, grid.algorithms[a]);
        cfg.seed = init_seed;
        const solvers::RunResult res = solvers::run(inst, cfg);
        out.rel_err = res.trace.records.back().rel_err;
        out.iters = res.trace.terminal_iter();
        out.failed = res.trace.status == solvers::Trace::Status::error;
      } catch (const Error&) {
        out.failed = true;
      }
    }
  });

  Table table;
  table.columns = {"field", "algorithm", "n", "m", "snr_db",
                   "median_rel_err_db"};
  for (std::size_t cell = 0; cell < cells; ++cell) {
    for (std::size_t a = 0; a < nalgo; ++a) {
      std::vector<double> errs;
      for (int trial = 0; trial < grid.trials; ++trial) {
        errs.push_back(
            outcomes[(cell * grid.trials + trial) * nalgo + a].rel_err);
      }
      table.add_row({
          std::string(grid.field == model::FieldKind::real ? "real"
                                                           : "complex"),
          std::string(solvers::algorithm_name(grid.algorithms[a])),
          static_cast<std::int64_t>(grid.n),
          static_cast<std::int64_t>(m),
          grid.snr_list[cell],
          20.0 * std::log10(median(errs)),
      });
    }
  }
  return table;
}

namespace {

// s-sparse real Gaussian truth supported on [0, half).
CVector sparse_truth(int n, int s, std::size_t half, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<std::size_t> idx(half);
  for (std::size_t i = 0; i < half; ++i) idx[i] = i;
  for (std::size_t i = half; i-- > 1;) {
    std::uniform_int_distribution<std::size_t> pick(0, i);
    std::swap(idx[i], idx[pick(rng)]);
  }
  CVector truth(n, cd(0.0, 0.0));
  for (int k = 0; k < s; ++k) {
    truth[idx[static_cast<std::size_t>(k)]] = cd(gauss(rng), 0.0);
  }
  return truth;
}

}  // namespace

Table sparse_experiment(int n, const std::vector<int>& sparsity_list,
                        const std::vector<double>& p_list, int trials,
                        SparseVariant variant, std::uint64_t base_seed,
                        int threads) {
  if (variant == SparseVariant::l1 && p_list.size() != sparsity_list.size()) {
    throw ConfigError("sparse_experiment: p_list must match sparsity_list");
  }
  const std::size_t half = static_cast<std::size_t>(n) / 2;  // support [0, n/2)
  BVector support(static_cast<std::size_t>(n), 0);
  for (std::size_t i = 0; i < half; ++i) support[i] = 1;

  const std::size_t cells = sparsity_list.size();
  const std::size_t tasks = cells * static_cast<std::size_t>(trials);
  std::vector<TrialOutcome> outcomes(tasks);

  parallel_for(tasks, threads, [&](std::size_t task) {
    const std::size_t cell = task / trials;
    const std::size_t trial = task % trials;
    const int s = sparsity_list[cell];
    TrialOutcome& out = outcomes[task];
    if (s == 0) {  // zero signal recovered trivially; rate 1 by convention
      out.rel_err = 0.0;
      return;
    }
    const std::uint64_t key = static_cast<std::uint64_t>(s);
    const std::uint64_t inst_seed = mix_seed(base_seed, key, trial, 10);
    const std::uint64_t truth_seed = mix_seed(base_seed, key, trial, 11);
    const std::uint64_t init_seed = mix_seed(base_seed, key, trial, 12);
    try {
      model::ProblemInstance inst =
          model::gen_gaussian(n, n, model::FieldKind::real, inst_seed);
      CVector truth = sparse_truth(n, s, half, truth_seed);
      inst.amplitudes = model::measure(inst.ensemble, truth);
      inst.truth = std::move(truth);

      model::PriorSpec prior =
          variant == SparseVariant::l1
              ? model::PriorSpec::soft(p_list[cell], support)
              : model::PriorSpec::hard(s, support);

      solvers::SolverConfig cfg;
      cfg.algorithm = solvers::Algorithm::gps;
      cfg.max_iters = 5000;
      cfg.tol = 1e-3;
      cfg.stop_rule = solvers::StopRule::oracle_rel_err;
      cfg.seed = init_seed;

      const solvers::RunResult res = solvers::run(inst, cfg, prior);
      out.rel_err = res.trace.records.back().rel_err;
      out.iters = res.trace.terminal_iter();
      out.failed = res.trace.status == solvers::Trace::Status::error;
    } catch (const Error&) {
      out.failed = true;
    }
  });

  Table table;
  table.columns = {"variant", "n", "s", "p", "rate", "mean_iters"};
  for (std::size_t cell = 0; cell < cells; ++cell) {
    std::vector<double> iters;
    int successes = 0;
    for (int trial = 0; trial < trials; ++trial) {
      const TrialOutcome& out = outcomes[cell * trials + trial];
      iters.push_back(static_cast<double>(out.iters));
      if (!out.failed && out.rel_err < 1e-3) ++successes;
    }
    table.add_row({
        std::string(variant == SparseVariant::l1 ? "l1" : "l0"),
        static_cast<std::int64_t>(n),
        static_cast<std::int64_t>(sparsity_list[cell]),
        variant == SparseVariant::l1 ? p_list[cell] : 0.0,
        static_cast<double>(successes) / trials,
        mean(iters),
    });
  }
  return table;
}

RVector make_phantom(const PhantomSpec& spec) {
  const std::size_t h = spec.height, w = spec.width;
  RVector img(h * w, 0.0);
  if (spec.blocks <= 0) {
    std::fill(img.begin(), img.end(), 1.0);
    return img;
  }
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> level(0.25, 1.0);
  std::uniform_int_distribution<std::size_t> size_r(2, std::max<std::size_t>(2, h / 2));
  std::uniform_int_distribution<std::size_t> size_c(2, std::max<std::size_t>(2, w / 2));
  for (int k = 0; k < spec.blocks; ++k) {
    const std::size_t bh = std::min(size_r(rng), h);
    const std::size_t bw = std::min(size_c(rng), w);
    std::uniform_int_distribution<std::size_t> row(0, h - bh), col(0, w - bw);
    const std::size_t r0 = row(rng), c0 = col(rng);
    const double v = level(rng);
    for (std::size_t r = r0; r < r0 + bh; ++r) {
      for (std::size_t c = c0; c < c0 + bw; ++c) img[r * w + c] += v;
    }
  }
  return img;
}

double aligned_rel_err(std::span<const cd> x, std::span<const cd> truth,
                       std::size_t h, std::size_t w) {
  if (x.size() != h * w || truth.size() != h * w) {
    throw DimensionError("aligned_rel_err: bad image dimensions");
  }
  CVector cand(h * w);
  double best = std::numeric_limits<double>::infinity();
  for (int mirror = 0; mirror < 4; ++mirror) {
    const bool flip_h = mirror & 1, flip_v = mirror & 2;
    for (std::size_t dy = 0; dy < h; ++dy) {
      for (std::size_t dx = 0; dx < w; ++dx) {
        for (std::size_t r = 0; r < h; ++r) {
          for (std::size_t c = 0; c < w; ++c) {
            std::size_t sr = flip_v ? h - 1 - r : r;
            std::size_t sc = flip_h ? w - 1 - c : c;
            sr = (sr + dy) % h;
            sc = (sc + dx) % w;
            cand[r * w + c] = x[sr * w + sc];
          }
        }
        best = std::min(best, model::rel_err(cand, truth));
      }
    }
  }
  return best;
}

Table tv_experiment(const PhantomSpec& phantom,
                    const std::vector<double>& snr_list, int trials,
                    const TvConfig& config, std::uint64_t base_seed,
                    int threads) {
  if (snr_list.empty()) throw ConfigError("tv_experiment: empty snr list");
  const RVector img = make_phantom(phantom);
  CVector truth(img.size());
  for (std::size_t i = 0; i < img.size(); ++i) truth[i] = img[i];

  const std::size_t h = phantom.height, w = phantom.width;
  const std::size_t tasks = snr_list.size() * static_cast<std::size_t>(trials);
  struct TvOutcome {
    double err_hio = std::numeric_limits<double>::quiet_NaN();
    double err_tv = std::numeric_limits<double>::quiet_NaN();
  };
  std::vector<TvOutcome> outcomes(tasks);

  parallel_for(tasks, threads, [&](std::size_t task) {
    const std::size_t cell = task / trials;
    const std::size_t trial = task % trials;
    const std::uint64_t key =
        std::bit_cast<std::uint64_t>(snr_list[cell]);
    const std::uint64_t noise_seed = mix_seed(base_seed, key, trial, 20);
    const std::uint64_t hio_seed = mix_seed(base_seed, key, trial, 21);

    model::ProblemInstance inst;
    inst.ensemble = model::SamplingEnsemble::oversampled_fourier(
        phantom.height, phantom.width, config.pad_factor);
    inst.amplitudes = model::measure(inst.ensemble, truth);
    inst.truth = truth;
    inst = model::add_noise(inst, snr_list[cell], noise_seed);

    const CVector x_hio =
        solvers::run_hio(inst.ensemble, inst.amplitudes, {}, config.hio_beta,
                         config.hio_iters, hio_seed);

    const graph::TvOperator tv{h, w};
    solvers::SolverState init;
    init.x = x_hio;
    init.y = inst.ensemble.apply_adjoint(init.x);
    init.lambda.assign(init.x.size(), cd(0.0, 0.0));
    init.nu.assign(init.y.size(), cd(0.0, 0.0));
    init.y2 = tv.apply(init.x);
    init.nu2.assign(init.y2.size(), cd(0.0, 0.0));

    solvers::SolverConfig cfg;
    cfg.algorithm = solvers::Algorithm::gps_tv;
    cfg.t = config.t;
    cfg.max_iters = config.rgps_iters;
    cfg.tol = 0.0;  // run the full refinement budget
    cfg.stop_rule = solvers::StopRule::oracle_rel_err;
    cfg.tv_weight = config.tv_weight;
    const model::PriorSpec prior = model::PriorSpec::indicator({}, true, true);

    TvOutcome& out = outcomes[task];
    out.err_hio = aligned_rel_err(x_hio, truth, h, w);
    try {
      const solvers::RunResult res = solvers::run(inst, cfg, prior, &init);
      out.err_tv = aligned_rel_err(res.x, truth, h, w);
    } catch (const Error&) {
      // leave err_tv NaN; the row still reports the HIO error
    }
  });

  Table table;
  table.columns = {"h", "w", "snr_db", "err_hio", "err_hio_rgps"};
  for (std::size_t cell = 0; cell < snr_list.size(); ++cell) {
    for (int trial = 0; trial < trials; ++trial) {
      const TvOutcome& out = outcomes[cell * trials + trial];
      table.add_row({
          static_cast<std::int64_t>(phantom.height),
          static_cast<std::int64_t>(phantom.width),
          snr_list[cell],
          out.err_hio,
          out.err_tv,
      });
    }
  }
  return table;
}

}  // namespace gps::experiments
