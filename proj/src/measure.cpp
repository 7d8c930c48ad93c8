#include "agency/measure.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <string>

#include <Eigen/Dense>

#include "agency/errors.hpp"
#include "agency/rng.hpp"

namespace agency {
namespace {

// Length of [max(0, f - eps), min(M, f + eps)], exactly 2 eps when unclipped.
double interval_length(double f, double eps, double bound) {
  const bool low_clipped = f - eps < 0.0;
  const bool high_clipped = f + eps > bound;
  if (!low_clipped && !high_clipped) return 2.0 * eps;
  const double lo = low_clipped ? 0.0 : f - eps;
  const double hi = high_clipped ? bound : f + eps;
  return hi - lo;
}

}  // namespace

FunctionCube::FunctionCube(double bound_m, std::vector<double> f_ideal, double epsilon)
    : bound_m_(bound_m), f_ideal_(std::move(f_ideal)), epsilon_(epsilon) {
  if (f_ideal_.empty()) throw ValidationError("cube dimension n must be at least 1");
  if (!(bound_m_ > 0.0) || !std::isfinite(bound_m_)) {
    throw ValidationError("cube bound M must be positive and finite");
  }
  if (!(epsilon_ > 0.0) || !std::isfinite(epsilon_)) {
    throw ValidationError("tube half-width epsilon must be positive and finite");
  }
  for (double v : f_ideal_) {
    if (!(v >= 0.0 && v <= bound_m_)) {
      throw ValidationError("f_ideal entries must lie in [0, M]");
    }
  }
}

FunctionCube FunctionCube::constant_ideal(std::size_t n, double bound_m, double value,
                                          double epsilon) {
  return FunctionCube(bound_m, std::vector<double>(n, value), epsilon);
}

bool FunctionCube::interior() const {
  return std::all_of(f_ideal_.begin(), f_ideal_.end(), [this](double f) {
    return f - epsilon_ >= 0.0 && f + epsilon_ <= bound_m_;
  });
}

MeasureReport epsilon_tube_measure(const FunctionCube& cube) {
  MeasureReport report;
  const double bound = cube.bound_m();
  const double eps = cube.epsilon();
  const auto n = static_cast<double>(cube.n());
  report.log10_total = n * std::log10(bound);
  report.interval_lengths.reserve(cube.n());

  std::size_t interior_count = 0;
  double clipped_log_measure = 0.0;
  double clipped_log_ratio = 0.0;
  for (double f : cube.f_ideal()) {
    const double len = interval_length(f, eps, bound);
    report.interval_lengths.push_back(len);
    if (len <= 0.0) {
      report.measure_is_zero = true;
      continue;
    }
    if (len == 2.0 * eps && f - eps >= 0.0 && f + eps <= bound) {
      ++interior_count;
    } else {
      clipped_log_measure += std::log10(len);
      clipped_log_ratio += std::log10(len / bound);
    }
  }
  if (report.measure_is_zero) {
    report.log10_measure = -std::numeric_limits<double>::infinity();
    report.log10_probability = -std::numeric_limits<double>::infinity();
    return report;
  }
  const auto k = static_cast<double>(interior_count);
  report.log10_measure = k * std::log10(2.0 * eps) + clipped_log_measure;
  report.log10_probability = k * std::log10(2.0 * eps / bound) + clipped_log_ratio;
  return report;
}

double interior_log10_probability(std::size_t n, double bound_m, double log10_epsilon) {
  if (n == 0) throw ValidationError("cube dimension n must be at least 1");
  if (!(bound_m > 0.0) || !std::isfinite(bound_m)) {
    throw ValidationError("cube bound M must be positive and finite");
  }
  if (!std::isfinite(log10_epsilon)) throw ValidationError("log10 epsilon must be finite");
  const double per_coordinate = std::log10(2.0) + log10_epsilon - std::log10(bound_m);
  if (per_coordinate > 0.0) {
    throw DomainError("tube wider than the cube; the interior closed form does not apply");
  }
  return static_cast<double>(n) * per_coordinate;
}

MonteCarloEstimate monte_carlo_measure(const FunctionCube& cube, std::uint64_t samples,
                                       std::uint64_t seed, std::size_t workers) {
  if (samples == 0) throw ValidationError("Monte Carlo needs at least one sample");
  workers = std::clamp<std::size_t>(workers, 1, 64);
  const std::uint64_t dims = cube.n();
  const double bound = cube.bound_m();
  const double eps = cube.epsilon();
  const auto ideal = cube.f_ideal();
  const std::uint64_t key = mix64(seed);

  auto count_range = [&](std::uint64_t begin, std::uint64_t end) {
    std::uint64_t hits = 0;
    for (std::uint64_t i = begin; i < end; ++i) {
      bool inside = true;
      for (std::uint64_t j = 0; j < dims && inside; ++j) {
        const double x = bound * to_unit_interval(mix64(key ^ mix64(i * dims + j)));
        inside = std::abs(x - ideal[j]) <= eps;
      }
      hits += inside ? 1 : 0;
    }
    return hits;
  };

  std::uint64_t hits = 0;
  if (workers == 1) {
    hits = count_range(0, samples);
  } else {
    std::vector<std::future<std::uint64_t>> parts;
    const std::uint64_t chunk = (samples + workers - 1) / workers;
    for (std::uint64_t begin = 0; begin < samples; begin += chunk) {
      parts.push_back(std::async(std::launch::async, count_range, begin,
                                 std::min(samples, begin + chunk)));
    }
    for (auto& part : parts) hits += part.get();
  }

  MonteCarloEstimate out;
  out.hits = hits;
  out.samples = samples;
  const auto total = static_cast<double>(samples);
  out.estimate = static_cast<double>(hits) / total;
  out.std_error = std::sqrt(out.estimate * (1.0 - out.estimate) / total);
  const double analytic = std::pow(10.0, epsilon_tube_measure(cube).log10_probability);
  out.underpowered = analytic < 10.0 / total;
  return out;
}

ProjectionResult subspace_projection(const SubspaceBasis& basis, std::span<const double> f) {
  const std::size_t n = basis.size();
  if (basis.e0.size() != n || basis.a0.size() != n) {
    throw DimensionError("basis vectors have different lengths");
  }
  if (f.size() != n) throw DimensionError("target length differs from basis length");
  if (n == 0) throw ValidationError("basis vectors must be non-empty");

  const auto rows = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd b(rows, 3);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto k = static_cast<std::size_t>(i);
    b(i, 0) = basis.c0[k];
    b(i, 1) = basis.e0[k];
    b(i, 2) = basis.a0[k];
  }
  if (!b.allFinite()) throw ValidationError("basis has a non-finite entry");
  const Eigen::Map<const Eigen::VectorXd> target(f.data(), rows);

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(b, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sigma = svd.singularValues();
  const double cutoff = sigma.size() > 0 ? 1e-10 * sigma(0) : 0.0;

  ProjectionResult result;
  Eigen::Vector3d coeffs = Eigen::Vector3d::Zero();
  const Eigen::VectorXd ut_f = svd.matrixU().transpose() * target;
  for (Eigen::Index k = 0; k < sigma.size(); ++k) {
    if (sigma(k) <= cutoff || sigma(k) == 0.0) continue;
    ++result.effective_rank;
    coeffs += svd.matrixV().col(k) * (ut_f(k) / sigma(k));
  }
  for (int k = 0; k < 3; ++k) result.coefficients[static_cast<std::size_t>(k)] = coeffs(k);
  result.residual_norm = (target - b * coeffs).norm();
  return result;
}

}  // namespace agency
