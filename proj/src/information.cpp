#include "agency/information.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "agency/errors.hpp"
#include "agency/mdp.hpp"

namespace agency {
namespace {

void require_stochastic(std::span<const double> probs, const std::string& what) {
  if (probs.empty()) throw ValidationError(what + " is empty");
  double total = 0.0;
  for (double p : probs) {
    if (!std::isfinite(p) || p < 0.0) {
      throw ValidationError(what + " has a negative or non-finite entry");
    }
    total += p;
  }
  if (std::abs(total - 1.0) > kStochasticTolerance) {
    throw ValidationError(what + " sums to " + std::to_string(total) + ", not 1");
  }
}

double xlogx(double p) { return p > 0.0 ? p * std::log(p) : 0.0; }

}  // namespace

double from_nats(double nats, LogBase base) {
  return base == LogBase::bits ? nats / std::numbers::ln2 : nats;
}

Distribution::Distribution(std::vector<double> probs) : probs_(std::move(probs)) {
  require_stochastic(probs_, "distribution");
}

Distribution Distribution::uniform(std::size_t n) {
  if (n == 0) throw ValidationError("distribution must have at least one outcome");
  return Distribution(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

Distribution Distribution::one_hot(std::size_t n, std::size_t index) {
  if (index >= n) throw ValidationError("one-hot index out of range");
  std::vector<double> probs(n, 0.0);
  probs[index] = 1.0;
  return Distribution(std::move(probs));
}

ChannelMatrix::ChannelMatrix(std::size_t num_inputs, std::size_t num_outputs,
                             std::vector<double> rows)
    : num_inputs_(num_inputs), num_outputs_(num_outputs), rows_(std::move(rows)) {
  if (num_inputs_ == 0 || num_outputs_ == 0) {
    throw ValidationError("channel needs at least one input and one output");
  }
  if (rows_.size() != num_inputs_ * num_outputs_) {
    throw DimensionError("channel has " + std::to_string(rows_.size()) +
                         " entries, expected " + std::to_string(num_inputs_ * num_outputs_));
  }
  for (std::size_t x = 0; x < num_inputs_; ++x) {
    require_stochastic(row(x), "channel row " + std::to_string(x));
  }
}

ChannelMatrix ChannelMatrix::identity(std::size_t k) {
  std::vector<double> rows(k * k, 0.0);
  for (std::size_t i = 0; i < k; ++i) rows[i * k + i] = 1.0;
  return ChannelMatrix(k, k, std::move(rows));
}

ChannelMatrix ChannelMatrix::binary_symmetric(double crossover) {
  if (!(crossover >= 0.0 && crossover <= 1.0)) {
    throw ValidationError("crossover probability must lie in [0, 1]");
  }
  return ChannelMatrix(2, 2, {1.0 - crossover, crossover, crossover, 1.0 - crossover});
}

std::vector<double> ChannelMatrix::output_marginal(const Distribution& input) const {
  if (input.size() != num_inputs_) {
    throw DimensionError("input distribution length differs from channel inputs");
  }
  std::vector<double> q(num_outputs_, 0.0);
  for (std::size_t x = 0; x < num_inputs_; ++x) {
    const double px = input[x];
    if (px == 0.0) continue;
    const auto w = row(x);
    for (std::size_t y = 0; y < num_outputs_; ++y) q[y] += px * w[y];
  }
  return q;
}

ChannelMatrix ChannelMatrix::permuted_inputs(std::span<const std::size_t> order) const {
  if (order.size() != num_inputs_) throw DimensionError("permutation length");
  std::vector<double> rows;
  rows.reserve(rows_.size());
  for (std::size_t idx : order) {
    if (idx >= num_inputs_) throw ValidationError("permutation index out of range");
    const auto r = row(idx);
    rows.insert(rows.end(), r.begin(), r.end());
  }
  return ChannelMatrix(num_inputs_, num_outputs_, std::move(rows));
}

double entropy(std::span<const double> probs, LogBase base) {
  double h = 0.0;
  for (double p : probs) h -= xlogx(p);
  return from_nats(h, base);
}

double curiosity_kl(const Distribution& p, const Distribution& q, double smoothing,
                    LogBase base) {
  if (p.size() != q.size()) {
    throw DimensionError("curiosity: p and q have different lengths");
  }
  if (!(smoothing >= 0.0) || !std::isfinite(smoothing)) {
    throw ValidationError("smoothing must be a finite non-negative number");
  }
  double kl = 0.0;
  for (std::size_t x = 0; x < p.size(); ++x) {
    if (p[x] == 0.0) continue;
    const double shifted = q[x] + smoothing;
    if (shifted == 0.0) {
      throw SingularityError("q(" + std::to_string(x) +
                             ") = 0 on the support of p; supply a positive smoothing");
    }
    kl += p[x] * (std::log(p[x]) - std::log(shifted));
  }
  // Without smoothing the Gibbs inequality holds; clamp away rounding.
  if (smoothing == 0.0) kl = std::max(kl, 0.0);
  return from_nats(kl, base);
}

double mutual_information(const Distribution& input, const ChannelMatrix& channel,
                          LogBase base) {
  const auto marginal = channel.output_marginal(input);
  double conditional = 0.0;
  for (std::size_t x = 0; x < channel.num_inputs(); ++x) {
    if (input[x] == 0.0) continue;
    conditional += input[x] * entropy(channel.row(x));
  }
  return from_nats(std::max(0.0, entropy(marginal) - conditional), base);
}

CapacityResult blahut_arimoto(const ChannelMatrix& channel, double tol,
                              std::size_t max_iter) {
  if (!(tol > 0.0)) throw ValidationError("capacity tolerance must be positive");
  if (max_iter == 0) throw ValidationError("max_iter must be positive");
  const std::size_t nx = channel.num_inputs();
  const std::size_t ny = channel.num_outputs();

  std::vector<double> p(nx, 1.0 / static_cast<double>(nx));
  std::vector<double> divergence(nx);
  std::vector<double> q(ny);
  double gap = std::numeric_limits<double>::infinity();

  for (std::size_t iter = 0; iter <= max_iter; ++iter) {
    std::fill(q.begin(), q.end(), 0.0);
    for (std::size_t x = 0; x < nx; ++x) {
      const auto w = channel.row(x);
      for (std::size_t y = 0; y < ny; ++y) q[y] += p[x] * w[y];
    }
    // D(x) = KL(W(.|x) || q); I(p) = sum_x p(x) D(x) and C <= max_x D(x).
    double info = 0.0;
    double upper = -std::numeric_limits<double>::infinity();
    for (std::size_t x = 0; x < nx; ++x) {
      const auto w = channel.row(x);
      double d = 0.0;
      for (std::size_t y = 0; y < ny; ++y) {
        if (w[y] > 0.0) d += w[y] * (std::log(w[y]) - std::log(q[y]));
      }
      divergence[x] = d;
      info += p[x] * d;
      upper = std::max(upper, d);
    }
    info = std::max(info, 0.0);
    gap = std::max(upper - info, 0.0);
    if (gap <= tol) {
      return CapacityResult{info, Distribution(p), iter, gap};
    }
    if (iter == max_iter) break;

    // p(x) <- p(x) exp(D(x)) / Z, shifted by the max for stability.
    double total = 0.0;
    for (std::size_t x = 0; x < nx; ++x) {
      p[x] *= std::exp(divergence[x] - upper);
      total += p[x];
    }
    for (double& px : p) px /= total;
  }
  throw IterationLimitError("Blahut-Arimoto did not certify the capacity within " +
                                std::to_string(max_iter) + " iterations",
                            gap);
}

}  // namespace agency
