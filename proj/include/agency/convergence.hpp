#pragma once

namespace agency {

/// Depth L and parameter count N of a bounded-depth network, N kept in log10.
class NetworkShape {
 public:
  static NetworkShape from_params(int depth_l, double params_n);
  static NetworkShape from_log10_params(int depth_l, double log10_params_n);

  int depth_l() const noexcept { return depth_l_; }
  double log10_params() const noexcept { return log10_params_; }

 private:
  NetworkShape(int depth_l, double log10_params);

  int depth_l_;
  double log10_params_;
};

/// Solves N = eps^(-1 / (2 (L - 2))) at equality: log10 eps = -2 (L - 2) log10 N.
/// Constants hidden by the asymptotic bound are taken as 1.
double bounded_depth_epsilon(const NetworkShape& shape);

enum class ComplexityBase { natural, ten };

struct ComplexityEstimate {
  double value = 0.0;
  ComplexityBase base = ComplexityBase::natural;
  bool theta_constants_assumed = true;
};

/// log(1 / eps) from log10 eps, without materializing eps.
ComplexityEstimate log_complexity(double epsilon_log10, ComplexityBase base);

struct RateQuery {
  double dim_d = 0.0;
  double sparsity_s = 0.0;
  double iterations_t = 0.0;
};

struct RateComparison {
  double dense_rate = 0.0;   ///< d / T
  double sparse_rate = 0.0;  ///< s ln(d) / T
  double speedup = 0.0;      ///< d / (s ln d)
  bool theta_constants_assumed = true;
};

RateComparison sparse_rate_compare(const RateQuery& query);

}  // namespace agency
