#include "sament/kernels.hpp"

#include <fftw3.h>
#include <omp.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <mutex>
#include <numbers>
#include <vector>

#include "sament/errors.hpp"

namespace sament::kernels {

namespace {

constexpr double kPi = std::numbers::pi;

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

inline bool better(double q, std::uint64_t idx, double best_q, std::uint64_t best_idx) {
  return q < best_q || (q == best_q && idx < best_idx);
}

/// Scan configs [c0, c1) into `res`.
void scan_range(const ScanRequest& req, std::size_t c0, std::size_t c1, ScanResult& res) {
  const std::size_t A = req.atoms;
  const bool shared_gram = req.star && req.star_measured.gram.data() == req.primary.gram.data();
  std::vector<double> t(A);
  for (std::size_t c = c0; c < c1; ++c) {
    const double* G = req.primary.gram.data() + c * A * A;
    const double* b = req.primary.lin.data() + c * A;
    const double* Gm = req.star ? req.star_measured.gram.data() + c * A * A : nullptr;
    const double* bm = req.star ? req.star_measured.lin.data() + c * A : nullptr;
    const double* Ga = req.star ? req.star_ambient.gram.data() + c * A * A : nullptr;
    const double* ba = req.star ? req.star_ambient.lin.data() + c * A : nullptr;
    const std::uint64_t base = (req.first_config + c) * req.set_size + req.first_row;
    for (std::size_t r = 0; r < req.row_count; ++r) {
      const double* al = req.rows.data() + r * A;
      double quad = 0.0, lin = 0.0;
      for (std::size_t i = 0; i < A; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < A; ++j) s += G[i * A + j] * al[j];
        quad += al[i] * s;
        lin += al[i] * b[i];
      }
      const double q = req.primary.constant - 2.0 * lin + quad;
      const std::uint64_t idx = base + r;
      if (better(q, idx, res.best_q, res.best_index)) {
        res.best_q = q;
        res.best_index = idx;
      }
      if (!req.star) continue;

      double quad_m = quad, lin_m = 0.0, quad_a = 0.0, lin_a = 0.0;
      if (!shared_gram) quad_m = 0.0;
      for (std::size_t i = 0; i < A; ++i) {
        double sa = 0.0, sm = 0.0;
        for (std::size_t j = 0; j < A; ++j) {
          sa += Ga[i * A + j] * al[j];
          if (!shared_gram) sm += Gm[i * A + j] * al[j];
        }
        quad_a += al[i] * sa;
        if (!shared_gram) quad_m += al[i] * sm;
        lin_m += al[i] * bm[i];
        lin_a += al[i] * ba[i];
      }
      const double qa = req.star_ambient.constant - 2.0 * lin_a + quad_a;
      const double qm = req.star_measured.constant - 2.0 * lin_m + quad_m;
      if (better(qa, idx, res.ambient_q, res.ambient_index)) {
        res.ambient_q = qa;
        res.ambient_index = idx;
      }
      if (qa > req.skip_below) {
        const double ratio = std::sqrt(std::max(0.0, qm) / qa);
        res.min_ratio = std::min(res.min_ratio, ratio);
        res.max_ratio = std::max(res.max_ratio, ratio);
        ++res.pairs;
      }
    }
  }
}

void check_scan(const ScanRequest& req) {
  const std::size_t A = req.atoms;
  SAMENT_REQUIRE(req.rows.size() >= req.row_count * A, "scan: row table too short");
  SAMENT_REQUIRE(req.primary.gram.size() >= req.configs * A * A && req.primary.lin.size() >= req.configs * A,
                 "scan: primary form too short");
  if (req.star) {
    SAMENT_REQUIRE(req.star_measured.gram.size() >= req.configs * A * A &&
                       req.star_ambient.gram.size() >= req.configs * A * A &&
                       req.star_measured.lin.size() >= req.configs * A &&
                       req.star_ambient.lin.size() >= req.configs * A,
                   "scan: star forms too short");
  }
}

void pair_range(std::span<const double> pts, std::span<const double> proj, std::size_t m, std::size_t d,
                std::size_t n, double skip_below, std::size_t i, PairwiseResult& res) {
  for (std::size_t j = i + 1; j < m; ++j) {
    double da = 0.0, dp = 0.0;
    for (std::size_t q = 0; q < d; ++q) {
      const double v = pts[i * d + q] - pts[j * d + q];
      da += v * v;
    }
    if (std::sqrt(da) <= skip_below) continue;
    for (std::size_t q = 0; q < n; ++q) {
      const double v = proj[i * n + q] - proj[j * n + q];
      dp += v * v;
    }
    const double ratio = std::sqrt(dp / da);
    res.min_ratio = std::min(res.min_ratio, ratio);
    res.max_ratio = std::max(res.max_ratio, ratio);
    ++res.pairs;
  }
}

}  // namespace

void set_threads(int n) {
  if (n > 0) omp_set_num_threads(n);
}

int threads() { return omp_get_max_threads(); }

void step_bank_serial(std::span<const double> rows, std::size_t r, std::size_t len, std::size_t P,
                      std::span<double> out) {
  SAMENT_REQUIRE(rows.size() >= r * len && out.size() >= r * P, "step bank: buffer too short");
  const double inv2pi = 1.0 / std::sqrt(2.0 * kPi), invpi = 1.0 / std::sqrt(kPi);
  for (std::size_t i = 0; i < r; ++i) {
    const double* row = rows.data() + i * len;
    for (std::size_t p = 0; p < P; ++p) {
      const double b = -kPi + (static_cast<double>(p) + 0.5) * 2.0 * kPi / static_cast<double>(P);
      double s = len > 0 ? row[0] * (b + kPi) * inv2pi : 0.0;
      for (std::size_t f = 1; 2 * f - 1 < len; ++f) {
        const double fd = static_cast<double>(f);
        s += row[2 * f - 1] * std::sin(fd * b) / fd * invpi;
        if (2 * f < len) s += row[2 * f] * ((f % 2 == 0 ? 1.0 : -1.0) - std::cos(fd * b)) / fd * invpi;
      }
      out[i * P + p] = s;
    }
  }
}

void step_bank_fft(std::span<const double> rows, std::size_t r, std::size_t len, std::size_t P,
                   std::span<double> out) {
  SAMENT_REQUIRE(rows.size() >= r * len && out.size() >= r * P, "step bank: buffer too short");
  SAMENT_REQUIRE(P >= 1, "step bank: empty position grid");
  if (r == 0) return;
  const double inv2pi = 1.0 / std::sqrt(2.0 * kPi), invpi = 1.0 / std::sqrt(kPi);
  const int Pi = static_cast<int>(P);

  fftw_plan plan;
  {
    fftw_complex* a = fftw_alloc_complex(P);
    fftw_complex* b = fftw_alloc_complex(P);
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_dft_1d(Pi, a, b, FFTW_BACKWARD, FFTW_ESTIMATE);
    fftw_free(a);
    fftw_free(b);
  }
  const std::size_t fmax = len / 2;  // highest frequency present
  // phase e^{i f (pi/P - pi)} per frequency
  std::vector<std::complex<double>> phase(fmax + 1);
  for (std::size_t f = 0; f <= fmax; ++f) phase[f] = std::polar(1.0, static_cast<double>(f) * (kPi / P - kPi));

  const long long rr = static_cast<long long>(r);
#pragma omp parallel
  {
    fftw_complex* in = fftw_alloc_complex(P);
    fftw_complex* res = fftw_alloc_complex(P);
#pragma omp for schedule(static)
    for (long long ii = 0; ii < rr; ++ii) {
      const std::size_t i = static_cast<std::size_t>(ii);
      const double* row = rows.data() + i * len;
      std::fill(reinterpret_cast<double*>(in), reinterpret_cast<double*>(in) + 2 * P, 0.0);
      double constant = 0.0;
      for (std::size_t f = 1; f <= fmax; ++f) {
        const double fd = static_cast<double>(f);
        const double A = (2 * f - 1 < len) ? row[2 * f - 1] / fd * invpi : 0.0;
        const double sv = (2 * f < len) ? row[2 * f] / fd * invpi : 0.0;
        constant += (f % 2 == 0 ? 1.0 : -1.0) * sv;
        const std::complex<double> C = std::complex<double>(-sv, -A) * phase[f];
        const std::size_t q = f % P;
        in[q][0] += C.real();
        in[q][1] += C.imag();
      }
      fftw_execute_dft(plan, in, res);
      const double c0 = len > 0 ? row[0] * inv2pi : 0.0;
      for (std::size_t p = 0; p < P; ++p) {
        const double b = -kPi + (static_cast<double>(p) + 0.5) * 2.0 * kPi / static_cast<double>(P);
        out[i * P + p] = c0 * (b + kPi) + constant + res[p][0];
      }
    }
    fftw_free(in);
    fftw_free(res);
  }
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(plan);
}

void ScanResult::merge(const ScanResult& o) {
  if (better(o.best_q, o.best_index, best_q, best_index)) {
    best_q = o.best_q;
    best_index = o.best_index;
  }
  if (better(o.ambient_q, o.ambient_index, ambient_q, ambient_index)) {
    ambient_q = o.ambient_q;
    ambient_index = o.ambient_index;
  }
  min_ratio = std::min(min_ratio, o.min_ratio);
  max_ratio = std::max(max_ratio, o.max_ratio);
  pairs += o.pairs;
}

ScanResult scan_serial(const ScanRequest& req) {
  check_scan(req);
  ScanResult res;
  scan_range(req, 0, req.configs, res);
  return res;
}

ScanResult scan_parallel(const ScanRequest& req) {
  check_scan(req);
  if (req.configs <= 1) {
    // split rows instead of configs
    ScanResult total;
    const std::size_t R = req.row_count;
    const long long blocks = static_cast<long long>((R + 1023) / 1024);
    std::vector<ScanResult> part(static_cast<std::size_t>(std::max<long long>(blocks, 0)));
#pragma omp parallel for schedule(dynamic)
    for (long long bi = 0; bi < blocks; ++bi) {
      ScanRequest sub = req;
      const std::size_t r0 = static_cast<std::size_t>(bi) * 1024;
      sub.row_count = std::min<std::size_t>(1024, R - r0);
      sub.rows = req.rows.subspan(r0 * req.atoms);
      sub.first_row = req.first_row + r0;
      scan_range(sub, 0, req.configs, part[static_cast<std::size_t>(bi)]);
    }
    for (const auto& p : part) total.merge(p);
    return total;
  }
  const long long C = static_cast<long long>(req.configs);
  std::vector<ScanResult> part(static_cast<std::size_t>(omp_get_max_threads()));
#pragma omp parallel
  {
    ScanResult local;
#pragma omp for schedule(dynamic, 16)
    for (long long c = 0; c < C; ++c)
      scan_range(req, static_cast<std::size_t>(c), static_cast<std::size_t>(c) + 1, local);
    part[static_cast<std::size_t>(omp_get_thread_num())] = local;
  }
  ScanResult total;
  for (const auto& p : part) total.merge(p);
  return total;
}

PairwiseResult pairwise_distortion_serial(std::span<const double> pts, std::span<const double> proj, std::size_t m,
                                          std::size_t d, std::size_t n, double skip_below) {
  SAMENT_REQUIRE(pts.size() >= m * d && proj.size() >= m * n, "pairwise: buffer too short");
  PairwiseResult res;
  for (std::size_t i = 0; i < m; ++i) pair_range(pts, proj, m, d, n, skip_below, i, res);
  return res;
}

PairwiseResult pairwise_distortion_parallel(std::span<const double> pts, std::span<const double> proj,
                                            std::size_t m, std::size_t d, std::size_t n, double skip_below) {
  SAMENT_REQUIRE(pts.size() >= m * d && proj.size() >= m * n, "pairwise: buffer too short");
  std::vector<PairwiseResult> part(static_cast<std::size_t>(omp_get_max_threads()));
  const long long M = static_cast<long long>(m);
#pragma omp parallel
  {
    PairwiseResult local;
#pragma omp for schedule(dynamic)
    for (long long i = 0; i < M; ++i) pair_range(pts, proj, m, d, n, skip_below, static_cast<std::size_t>(i), local);
    part[static_cast<std::size_t>(omp_get_thread_num())] = local;
  }
  PairwiseResult res;
  for (const auto& p : part) {
    res.min_ratio = std::min(res.min_ratio, p.min_ratio);
    res.max_ratio = std::max(res.max_ratio, p.max_ratio);
    res.pairs += p.pairs;
  }
  return res;
}

}  // namespace sament::kernels
