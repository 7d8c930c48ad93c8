#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace agency {

enum class LogBase { nats, bits };

/// Converts a quantity measured in nats into `base`.
double from_nats(double nats, LogBase base);

/// Probability vector summing to 1 within kStochasticTolerance.
class Distribution {
 public:
  explicit Distribution(std::vector<double> probs);

  static Distribution uniform(std::size_t n);
  static Distribution one_hot(std::size_t n, std::size_t index);

  std::span<const double> probs() const noexcept { return probs_; }
  std::size_t size() const noexcept { return probs_.size(); }
  double operator[](std::size_t i) const { return probs_[i]; }

  friend bool operator==(const Distribution&, const Distribution&) = default;

 private:
  std::vector<double> probs_;
};

/// Row-stochastic channel W(y | x), rows indexed by input symbol.
class ChannelMatrix {
 public:
  ChannelMatrix(std::size_t num_inputs, std::size_t num_outputs,
                std::vector<double> rows);

  static ChannelMatrix identity(std::size_t k);
  static ChannelMatrix binary_symmetric(double crossover);

  std::size_t num_inputs() const noexcept { return num_inputs_; }
  std::size_t num_outputs() const noexcept { return num_outputs_; }
  std::span<const double> data() const noexcept { return rows_; }

  std::span<const double> row(std::size_t x) const {
    return {rows_.data() + x * num_outputs_, num_outputs_};
  }
  double operator()(std::size_t x, std::size_t y) const {
    return rows_[x * num_outputs_ + y];
  }

  /// Output marginal sum_x p(x) W(. | x).
  std::vector<double> output_marginal(const Distribution& input) const;

  /// Channel with its input symbols reordered: new row i is old row order[i].
  ChannelMatrix permuted_inputs(std::span<const std::size_t> order) const;

 private:
  std::size_t num_inputs_;
  std::size_t num_outputs_;
  std::vector<double> rows_;
};

struct CapacityResult {
  double capacity = 0.0;  ///< nats
  Distribution input_dist;
  std::size_t iterations = 0;
  double achieved_tol = 0.0;  ///< certified upper-minus-lower bound gap, nats

  double capacity_in(LogBase base) const { return from_nats(capacity, base); }
};

/// Shannon entropy with 0 log 0 = 0.
double entropy(std::span<const double> probs, LogBase base = LogBase::nats);

/// sum_x p(x) [log p(x) - log(q(x) + smoothing)] over the support of p.
/// Throws SingularityError when q vanishes on that support and smoothing is 0.
double curiosity_kl(const Distribution& p, const Distribution& q, double smoothing,
                    LogBase base = LogBase::nats);

/// I = H(output marginal) - sum_x p(x) H(W(. | x)).
double mutual_information(const Distribution& input, const ChannelMatrix& channel,
                          LogBase base = LogBase::nats);

/// Blahut-Arimoto from the uniform input. Stops once the gap between the
/// upper bound max_x D(W(.|x) || q) and I(p) is at most `tol` nats; the
/// reported capacity is I(p) of the returned input distribution.
CapacityResult blahut_arimoto(const ChannelMatrix& channel, double tol,
                              std::size_t max_iter = 1'000'000);

}  // namespace agency
