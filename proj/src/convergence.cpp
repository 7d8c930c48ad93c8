#include "agency/convergence.hpp"

#include <cmath>
#include <numbers>

#include "agency/errors.hpp"

namespace agency {

NetworkShape::NetworkShape(int depth_l, double log10_params)
    : depth_l_(depth_l), log10_params_(log10_params) {
  if (depth_l_ < 3) {
    throw DomainError("bounded-depth estimate needs depth L >= 3");
  }
  // N > 1, otherwise the bound is flat in L and eps >= 1.
  if (!(log10_params_ > 0.0) || !std::isfinite(log10_params_)) {
    throw DomainError("parameter count N must be finite and greater than 1");
  }
}

NetworkShape NetworkShape::from_params(int depth_l, double params_n) {
  if (!(params_n > 0.0)) throw DomainError("parameter count N must be positive");
  return NetworkShape(depth_l, std::log10(params_n));
}

NetworkShape NetworkShape::from_log10_params(int depth_l, double log10_params_n) {
  return NetworkShape(depth_l, log10_params_n);
}

double bounded_depth_epsilon(const NetworkShape& shape) {
  return -2.0 * static_cast<double>(shape.depth_l() - 2) * shape.log10_params();
}

ComplexityEstimate log_complexity(double epsilon_log10, ComplexityBase base) {
  if (!std::isfinite(epsilon_log10)) throw DomainError("log10 epsilon must be finite");
  if (epsilon_log10 > 0.0) {
    throw DomainError("epsilon > 1 lies outside the approximation regime");
  }
  // -0.0 would otherwise leak into reports.
  const double decades = epsilon_log10 == 0.0 ? 0.0 : -epsilon_log10;
  ComplexityEstimate out;
  out.base = base;
  out.value = base == ComplexityBase::ten ? decades : decades * std::numbers::ln10;
  return out;
}

RateComparison sparse_rate_compare(const RateQuery& query) {
  const double d = query.dim_d;
  const double s = query.sparsity_s;
  const double t = query.iterations_t;
  if (!std::isfinite(d) || !std::isfinite(s) || !std::isfinite(t)) {
    throw ValidationError("rate query fields must be finite");
  }
  if (!(d > 1.0)) throw DomainError("dimension d must exceed 1 for log d to be positive");
  if (!(s > 0.0) || !(t > 0.0)) {
    throw ValidationError("sparsity s and iterations T must be positive");
  }
  if (s > d) throw ValidationError("sparsity s cannot exceed dimension d");
  RateComparison out;
  out.dense_rate = d / t;
  out.sparse_rate = s * std::log(d) / t;
  out.speedup = d / (s * std::log(d));
  return out;
}

}  // namespace agency
