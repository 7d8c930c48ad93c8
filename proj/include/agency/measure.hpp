#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace agency {

/// Functions X -> [0, M] with |X| = n, viewed as points of [0, M]^n, plus the
/// sup-norm tube of half-width epsilon around f_ideal.
class FunctionCube {
 public:
  FunctionCube(double bound_m, std::vector<double> f_ideal, double epsilon);

  /// Cube with every coordinate of f_ideal at `value`.
  static FunctionCube constant_ideal(std::size_t n, double bound_m, double value,
                                     double epsilon);

  std::size_t n() const noexcept { return f_ideal_.size(); }
  double bound_m() const noexcept { return bound_m_; }
  double epsilon() const noexcept { return epsilon_; }
  std::span<const double> f_ideal() const noexcept { return f_ideal_; }

  /// True when every tube interval sits inside [0, M] unclipped.
  bool interior() const;

 private:
  double bound_m_;
  std::vector<double> f_ideal_;
  double epsilon_;
};

struct MeasureReport {
  double log10_measure = 0.0;
  bool measure_is_zero = false;  ///< log10_measure is -inf when set
  double log10_total = 0.0;
  double log10_probability = 0.0;
  std::vector<double> interval_lengths;
  bool independence_assumed = true;
};

/// Product of the clipped interval lengths, accumulated in log10.
MeasureReport epsilon_tube_measure(const FunctionCube& cube);

/// log10 of (2 eps / M)^n for an interior tube with eps given as log10; for
/// tolerances far below the smallest double.
double interior_log10_probability(std::size_t n, double bound_m, double log10_epsilon);

struct MonteCarloEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
  std::uint64_t hits = 0;
  std::uint64_t samples = 0;
  bool underpowered = false;
};

/// Hit-or-miss estimate of the tube's probability under the uniform law on
/// the cube. Sample i, coordinate j is drawn from a counter-based generator
/// keyed on (seed, i, j), so any worker count gives bit-identical results.
MonteCarloEstimate monte_carlo_measure(const FunctionCube& cube, std::uint64_t samples,
                                       std::uint64_t seed, std::size_t workers = 1);

struct SubspaceBasis {
  std::vector<double> c0;
  std::vector<double> e0;
  std::vector<double> a0;

  std::size_t size() const noexcept { return c0.size(); }
};

struct ProjectionResult {
  std::array<double, 3> coefficients{};
  double residual_norm = 0.0;
  std::size_t effective_rank = 0;
};

/// Least-squares projection of f onto span{c0, e0, a0} via SVD; singular
/// values below 1e-10 of the largest are treated as zero, and the minimum-norm
/// coefficients are returned.
ProjectionResult subspace_projection(const SubspaceBasis& basis, std::span<const double> f);

}  // namespace agency
