#pragma once

// Discretized L2([-pi, pi]) in the real trigonometric basis.
//
// Basis ordering (0-based index i):
//   i = 0        1 / sqrt(2 pi)
//   i = 2f - 1   cos(f t) / sqrt(pi)
//   i = 2f       sin(f t) / sqrt(pi)
// so that a prefix projection is a low-pass filter.

#include <cstddef>
#include <span>
#include <vector>

namespace sament {

enum class BasisKind { Trig };

struct BasisSpec {
  BasisKind kind = BasisKind::Trig;
  std::size_t ambient_dim = 4096;

  static BasisSpec trig(std::size_t ambient_dim);

  bool operator==(const BasisSpec&) const = default;
};

inline constexpr std::size_t kDefaultAmbientDim = 4096;

/// Frequency carried by basis function `i`.
constexpr std::size_t frequency_of(std::size_t i) { return (i + 1) / 2; }
constexpr bool is_sine(std::size_t i) { return i > 0 && i % 2 == 0; }

/// Value of basis function `i` at `t`.
double basis_value(std::size_t i, double t);

/// Element of the truncated Hilbert space; coefficients are coordinates <x, v_i>.
class Signal {
 public:
  Signal() = default;
  Signal(BasisSpec basis, std::vector<double> coeffs);

  static Signal zero(BasisSpec basis);
  /// Unit vector along basis function `i`.
  static Signal unit(BasisSpec basis, std::size_t i);

  const BasisSpec& basis() const noexcept { return basis_; }
  std::size_t size() const noexcept { return coeffs_.size(); }
  std::span<const double> coeffs() const noexcept { return coeffs_; }
  double operator[](std::size_t i) const { return coeffs_[i]; }

  /// Releases the coefficient storage (for in-place algebra by the owner).
  std::vector<double> take() && { return std::move(coeffs_); }

 private:
  BasisSpec basis_{};
  std::vector<double> coeffs_;
};

double inner(const Signal& x, const Signal& y);
double norm(const Signal& x);
double distance(const Signal& x, const Signal& y);

/// Keep coefficients [0, d), zero the rest. Requires 1 <= d <= ambient_dim.
Signal project_prefix(const Signal& x, std::size_t d);

/// Euclidean norm of coefficients [d, ambient_dim). Requires 1 <= d <= ambient_dim.
double tail_norm(const Signal& x, std::size_t d);

Signal operator+(const Signal& x, const Signal& y);
Signal operator-(const Signal& x, const Signal& y);
Signal operator*(double a, const Signal& x);

/// x + a * y
Signal axpy(const Signal& x, double a, const Signal& y);

/// Evaluate the synthesized function at `t`.
double synthesize(const Signal& x, double t);

/// Evaluate the synthesized function at many points (O(points * dim)).
std::vector<double> synthesize(const Signal& x, std::span<const double> ts);

}  // namespace sament
