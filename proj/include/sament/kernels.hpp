#pragma once

// Hot loops, each in a serial reference form and an OpenMP form. The two
// forms return identical results (reductions are order independent or done in
// index order).

#include <cstdint>
#include <limits>
#include <span>

namespace sament::kernels {

/// out[i * P + p] = <row_i, P_len 1_[-pi, x_p)>, x_p = -pi + (p + 1/2) 2 pi / P,
/// rows r x len row-major. Direct evaluation, O(r P len).
void step_bank_serial(std::span<const double> rows, std::size_t r, std::size_t len, std::size_t P,
                      std::span<double> out);

/// Same values through one length-P complex FFT per row, rows split across threads.
void step_bank_fft(std::span<const double> rows, std::size_t r, std::size_t len, std::size_t P,
                   std::span<double> out);

/// q(alpha) = constant - 2 <alpha, lin[c]> + alpha^T gram[c] alpha for every config c.
struct QuadraticForms {
  std::span<const double> gram;  ///< configs x atoms x atoms
  std::span<const double> lin;   ///< configs x atoms
  double constant = 0.0;
};

struct ScanRequest {
  std::size_t configs = 0;
  std::size_t atoms = 0;
  std::uint64_t first_config = 0;    ///< global index of config 0 in this chunk
  std::uint64_t set_size = 0;        ///< coefficient-set size (index stride per config)
  std::uint64_t first_row = 0;       ///< global index of rows[0] inside the coefficient set
  std::size_t row_count = 0;
  std::span<const double> rows;      ///< row_count x atoms

  QuadraticForms primary;            ///< |y - y_j|^2 in the measurement space
  bool star = false;                 ///< evaluate the two forms below as well
  QuadraticForms star_measured;      ///< |pi(x~) - pi(x~_j)|^2 (noise free)
  QuadraticForms star_ambient;       ///< |x~ - x~_j|^2
  double skip_below = 0.0;           ///< ambient pairs with q below this are skipped
};

struct ScanResult {
  std::uint64_t best_index = std::numeric_limits<std::uint64_t>::max();
  double best_q = std::numeric_limits<double>::infinity();
  std::uint64_t ambient_index = std::numeric_limits<std::uint64_t>::max();
  double ambient_q = std::numeric_limits<double>::infinity();
  double min_ratio = std::numeric_limits<double>::infinity();
  double max_ratio = 0.0;
  std::uint64_t pairs = 0;

  /// Combine two partial scans; ties go to the lower index.
  void merge(const ScanResult& o);
};

ScanResult scan_serial(const ScanRequest& req);
ScanResult scan_parallel(const ScanRequest& req);

struct PairwiseResult {
  double min_ratio = std::numeric_limits<double>::infinity();
  double max_ratio = 0.0;
  std::uint64_t pairs = 0;
};

/// Ratios |proj_i - proj_j| / |pts_i - pts_j| over all pairs i < j with
/// |pts_i - pts_j| > skip_below. pts m x d, proj m x n, both row-major.
PairwiseResult pairwise_distortion_serial(std::span<const double> pts, std::span<const double> proj, std::size_t m,
                                          std::size_t d, std::size_t n, double skip_below);
PairwiseResult pairwise_distortion_parallel(std::span<const double> pts, std::span<const double> proj,
                                            std::size_t m, std::size_t d, std::size_t n, double skip_below);

/// Threads used by the parallel kernels (OpenMP); 0 keeps the runtime default.
void set_threads(int n);
int threads();

}  // namespace sament::kernels
