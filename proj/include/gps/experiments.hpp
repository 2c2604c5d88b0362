#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "gps/model.hpp"
#include "gps/solvers.hpp"

namespace gps::experiments {

/// Typed result table. CSV and json-lines serializations round-trip the
/// cell values exactly (doubles use shortest round-trip formatting).
struct Table {
  using Cell = std::variant<std::int64_t, double, std::string>;

  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add_row(std::vector<Cell> row);
  bool operator==(const Table&) const = default;
};

enum class Format { csv, json_lines };

void emit(const Table& table, const std::string& path, Format format);
Table load_csv(const std::string& path);

struct ExperimentGrid {
  int n = 64;
  std::vector<double> m_ratios;
  int trials = 10;
  std::vector<solvers::Algorithm> algorithms;
  model::FieldKind field = model::FieldKind::real;
  std::vector<double> snr_list;  // noise sweep only; +inf = noiseless
  std::uint64_t base_seed = 1;
  int max_iters = 5000;
  double tol = 1e-3;
  double t = 0.1;  // relaxation for the robust variants
};

/// Success-rate / iteration-count grid over measurement ratios. Trials of
/// one (field, ratio) cell share instances across algorithms so iteration
/// counts are paired. Columns:
/// field,algorithm,n,m,ratio,trials,success_rate,mean_iters,median_iters
Table phase_transition(const ExperimentGrid& grid, int threads = 0);

/// Median terminal error at each SNR, max_iters defaulting to 200.
/// Columns: field,algorithm,n,m,snr_db,median_rel_err_db
Table noise_sweep(const ExperimentGrid& grid, int threads = 0);

enum class SparseVariant { l1, l0 };

/// Sparse recovery with m = n and known support [0, n/2). One row per
/// sparsity level. Columns: variant,n,s,p,rate,mean_iters
Table sparse_experiment(int n, const std::vector<int>& sparsity_list,
                        const std::vector<double>& p_list, int trials,
                        SparseVariant variant, std::uint64_t base_seed,
                        int threads = 0);

struct PhantomSpec {
  int height = 16, width = 16;
  int blocks = 4;  // 0 = constant image
  std::uint64_t seed = 0;
};

/// Nonnegative piecewise-constant test image (sums of random rectangles).
RVector make_phantom(const PhantomSpec& spec);

struct TvConfig {
  int pad_factor = 2;
  int hio_iters = 1000;
  double hio_beta = 1.0;
  int rgps_iters = 30;
  double t = 0.1;
  double tv_weight = 0.01;
};

/// HIO then TV-regularized RGPS refinement, per trial. One row per
/// (snr, trial). Columns: h,w,snr_db,err_hio,err_hio_rgps
Table tv_experiment(const PhantomSpec& phantom,
                    const std::vector<double>& snr_list, int trials,
                    const TvConfig& config, std::uint64_t base_seed,
                    int threads = 0);

/// Relative error after exhausting the trivial Fourier ambiguities:
/// 4 mirror states x circular shifts of the h x w support box.
double aligned_rel_err(std::span<const cd> x, std::span<const cd> truth,
                       std::size_t h, std::size_t w);

/// Deterministic index-based parallel loop; results must be written to
/// per-index slots. threads <= 0 picks the hardware concurrency.
void parallel_for(std::size_t count, int threads,
                  const std::function<void(std::size_t)>& body);

}  // namespace gps::experiments
