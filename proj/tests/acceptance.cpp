// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on failure.
// Usage: acceptance <path-to-agency-cli>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>

#include "agency/agency_losses.hpp"
#include "agency/convergence.hpp"
#include "agency/errors.hpp"
#include "agency/generators.hpp"
#include "agency/information.hpp"
#include "agency/measure.hpp"
#include "agency/rng.hpp"
#include "agency/runner.hpp"
#include "agency/starc.hpp"
#include "oracles.hpp"

using namespace agency;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;

  void require(bool condition, const std::string& what) {
    if (!condition && ok) {
      ok = false;
      detail = what;
    }
  }
};

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

int failures = 0;

void criterion(int id, const std::string& name, double limit_seconds,
               const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out.ok = false;
    out.detail = std::string("exception: ") + e.what();
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (limit_seconds > 0.0 && secs >= limit_seconds) {
    out.require(false, "runtime " + num(secs) + " s over limit " + num(limit_seconds) + " s");
  }
  if (!out.ok) ++failures;
  std::printf("%s criterion %d: %s (%.3f s)%s%s\n", out.ok ? "PASS" : "FAIL", id, name.c_str(),
              secs, out.detail.empty() ? "" : " - ", out.detail.c_str());
  std::fflush(stdout);
}

Outcome depth_twenty() {
  Outcome o;
  double value = 0.0;
  const auto start = std::chrono::steady_clock::now();
  value = bounded_depth_epsilon(NetworkShape::from_params(20, 1e10));
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  o.require(value == -360.0, "log10 eps = " + num(value));
  o.require(secs < 1e-3, "took " + num(secs) + " s");
  return o;
}

Outcome probability_law() {
  Outcome o;
  SplitMix64 rng(20240601);
  int checked_mc = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + rng.below(20);
    const double m = 0.5 + 9.5 * rng.uniform();
    const double ratio = 0.3 + 0.65 * rng.uniform();  // 2 eps / M
    const double eps = ratio * m / 2.0;
    std::vector<double> ideal(n);
    for (double& x : ideal) x = eps + (m - 2.0 * eps) * rng.uniform();
    const FunctionCube cube(m, ideal, eps);
    const double got = epsilon_tube_measure(cube).log10_probability;
    const double want = static_cast<double>(n) * (std::log10(2.0 * eps) - std::log10(m));
    o.require(std::abs(got - want) <= 1e-12 * std::abs(want),
              "cube " + std::to_string(trial) + ": " + num(got) + " vs " + num(want));
    const double p = std::pow(10.0, want);
    if (p >= 1e-4) {
      ++checked_mc;
      const auto mc = monte_carlo_measure(cube, 1000000, 1000 + trial, 4);
      o.require(std::abs(mc.estimate - p) <= 3.0 * mc.std_error,
                "Monte Carlo cube " + std::to_string(trial) + ": " + num(mc.estimate) +
                    " vs " + num(p) + " (se " + num(mc.std_error) + ")");
    }
  }
  o.require(checked_mc > 0, "no cube reached p >= 1e-4");
  if (o.ok) o.detail = std::to_string(checked_mc) + " Monte Carlo comparisons";
  return o;
}

Outcome channel_capacity() {
  Outcome o;
  for (double e : {0.05, 0.1, 0.25}) {
    const auto r = blahut_arimoto(ChannelMatrix::binary_symmetric(e), 1e-10);
    const double got = r.capacity_in(LogBase::bits);
    o.require(std::abs(got - oracle::bsc_capacity_bits(e)) <= 1e-6,
              "BSC(" + num(e) + ") = " + num(got));
  }
  const double tol = 1e-9;
  for (std::size_t k = 1; k <= 64; ++k) {
    const auto r = blahut_arimoto(ChannelMatrix::identity(k), tol);
    const double got = r.capacity_in(LogBase::bits);
    o.require(std::abs(got - std::log2(static_cast<double>(k))) <= tol,
              "noiseless k=" + std::to_string(k) + " gives " + num(got));
  }
  return o;
}

Outcome empowerment_equivalence() {
  Outcome o;
  int cases = 0;
  for (std::size_t w = 1; w <= 4; ++w)
    for (std::size_t h = 1; h <= 4; ++h) {
      const auto mdp = make_gridworld(w, h, 0.0, kDefaultDiscount);
      for (std::size_t horizon = 1; horizon <= 3; ++horizon) {
        const auto all = empowerment_all_states(mdp, horizon, 1e-10);
        for (std::size_t s = 0; s < w * h; ++s) {
          ++cases;
          const auto reach = oracle::reachable_cells(w, h, s / w, s % w, horizon);
          const double got = all[s].capacity_in(LogBase::bits);
          o.require(std::abs(got - std::log2(static_cast<double>(reach))) <= 1e-6,
                    std::to_string(w) + "x" + std::to_string(h) + " state " +
                        std::to_string(s) + " horizon " + std::to_string(horizon));
        }
      }
    }
  if (o.ok) o.detail = std::to_string(cases) + " (grid, state, horizon) cases";
  return o;
}

Outcome starc_invariance() {
  Outcome o;
  SplitMix64 rng(77);
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const std::size_t states = 2 + rng.below(5);
    const std::size_t actions = 1 + rng.below(3);
    const auto mdp = make_random_mdp(seed, states, actions, 0.3 * rng.uniform(), 0.9);
    const auto r = make_random_reward(seed + 10000, states, actions);
    const double a = 0.05 + 20.0 * rng.uniform();
    const auto phi = make_random_potential(seed + 20000, states, 5.0);
    const auto other = apply_potential_shaping(r.scaled(a), phi, mdp);
    const double d = starc_distance(r, other, mdp);
    worst = std::max(worst, d);
    o.require(d <= 1e-6, "invariance tuple " + std::to_string(seed) + ": " + num(d));
  }
  double worst_slack = -INFINITY;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto mdp = make_random_mdp(seed + 500, 4, 2, 0.25, 0.9);
    const auto x = make_random_reward(3 * seed + 30000, 4, 2);
    const auto y = make_random_reward(3 * seed + 30001, 4, 2);
    const auto z = make_random_reward(3 * seed + 30002, 4, 2);
    const double xy = starc_distance(x, y, mdp);
    o.require(xy == starc_distance(y, x, mdp), "asymmetry at triple " + std::to_string(seed));
    const double slack = starc_distance(x, z, mdp) - xy - starc_distance(y, z, mdp);
    worst_slack = std::max(worst_slack, slack);
    o.require(slack <= 1e-9, "triangle violated by " + num(slack));
  }
  if (o.ok) o.detail = "max invariance distance " + num(worst);
  return o;
}

Outcome constant_annihilation() {
  Outcome o;
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto mdp = make_random_mdp(seed, 2 + seed % 6, 1 + seed % 3, 0.2, 0.9);
    for (double c : {-5.0, 0.1, 7.0}) {
      const auto out =
          canonicalize(RewardTable::constant(mdp.num_states(), mdp.num_actions(), c), mdp);
      for (double v : out.values()) worst = std::max(worst, std::abs(v));
    }
  }
  o.require(worst <= 1e-8, "max |c(R)| = " + num(worst));
  o.detail = "max |c(R)| " + num(worst);
  return o;
}

Outcome curiosity_properties() {
  Outcome o;
  SplitMix64 rng(4242);
  int violations = 0;
  for (int i = 0; i < 1000; ++i) {
    const std::size_t n = 1 + rng.below(10);
    const Distribution p(oracle::random_distribution(rng, n, rng.below(n)));
    const Distribution q(oracle::random_distribution(rng, n));
    if (curiosity_kl(p, q, 0.0) < 0.0) ++violations;
  }
  o.require(violations == 0, std::to_string(violations) + " Gibbs violations");
  for (std::size_t k = 1; k <= 32; ++k) {
    for (std::size_t hot = 0; hot < k; hot += 7) {
      const double got = curiosity_kl(Distribution::one_hot(k, hot), Distribution::uniform(k), 0.0);
      o.require(std::abs(got - std::log(static_cast<double>(k))) <= 1e-12,
                "one-hot k=" + std::to_string(k));
    }
  }
  // Singularity exactly when q vanishes on p's support and smoothing is zero.
  for (int i = 0; i < 500; ++i) {
    const std::size_t n = 2 + rng.below(6);
    const Distribution p(oracle::random_distribution(rng, n, rng.below(n)));
    const Distribution q(oracle::random_distribution(rng, n, rng.below(n)));
    bool singular = false;
    for (std::size_t j = 0; j < n; ++j) singular |= p[j] > 0.0 && q[j] == 0.0;
    bool threw = false;
    try {
      (void)curiosity_kl(p, q, 0.0);
    } catch (const SingularityError&) {
      threw = true;
    }
    o.require(threw == singular, "singularity mismatch on trial " + std::to_string(i));
    bool smoothed_threw = false;
    try {
      (void)curiosity_kl(p, q, 1e-9);
    } catch (const SingularityError&) {
      smoothed_threw = true;
    }
    o.require(!smoothed_threw, "smoothed divergence raised");
  }
  return o;
}

Outcome subspace_rank() {
  Outcome o;
  SplitMix64 rng(8);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng.below(30);
    auto vec = [&] {
      std::vector<double> v(n);
      for (double& x : v) x = rng.uniform(-2.0, 2.0);
      return v;
    };
    SubspaceBasis b{vec(), vec(), vec()};
    if (trial % 4 == 1) b.a0 = b.c0;
    if (trial % 4 == 2) std::fill(b.e0.begin(), b.e0.end(), 0.0);
    const double x = rng.uniform(-3, 3), y = rng.uniform(-3, 3), z = rng.uniform(-3, 3);
    std::vector<double> f(n);
    for (std::size_t i = 0; i < n; ++i) f[i] = x * b.c0[i] + y * b.e0[i] + z * b.a0[i];
    const auto member = subspace_projection(b, f);
    o.require(member.effective_rank <= 3, "rank above 3");
    o.require(member.residual_norm <= 1e-9, "member residual " + num(member.residual_norm));
    worst = std::max(worst, member.residual_norm);
    const auto arbitrary = subspace_projection(b, vec());
    o.require(arbitrary.effective_rank <= 3, "rank above 3");
  }
  o.detail = "max member residual " + num(worst);
  return o;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string quote(const std::string& s) { return "'" + s + "'"; }

Outcome cli_determinism(const std::string& cli) {
  Outcome o;
  if (cli.empty()) {
    o.require(false, "no CLI path given");
    return o;
  }
  const fs::path dir = fs::temp_directory_path() / "agency_acceptance_cli";
  fs::remove_all(dir);
  fs::create_directories(dir);
  for (auto command : all_commands()) {
    const std::string name(to_string(command));
    std::string extra = " --seed 12345";
    if (command == Command::curiosity) extra += " --set 'curiosity.p=[0.3,0.7]' 'curiosity.q=[0.6,0.4]'";
    if (command == Command::measure) extra += " --set measure.samples=20000 measure.workers=3";
    if (command == Command::starc_distance || command == Command::agency_metric) {
      extra += " --set env.kind=random env.states=5 env.actions=3";
    }
    std::string outputs[2];
    for (int run = 0; run < 2; ++run) {
      const fs::path out = dir / (name + "_" + std::to_string(run) + ".json");
      const std::string cmd = quote(cli) + " " + name + extra + " --no-timestamp --output " +
                              quote(out.string());
      const int status = std::system(cmd.c_str());
      o.require(status == 0, name + " exited with status " + std::to_string(status));
      outputs[run] = slurp(out);
    }
    o.require(!outputs[0].empty(), name + " wrote no report");
    o.require(outputs[0] == outputs[1], name + " reports differ");
  }
  fs::remove_all(dir);
  if (o.ok) o.detail = std::to_string(all_commands().size()) + " commands byte-identical";
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";
  criterion(1, "bounded-depth epsilon for L=20, N=1e10 is 1e-360", 0.0, depth_twenty);
  criterion(2, "interior tube probability law and Monte Carlo agreement", 10.0, probability_law);
  criterion(3, "channel capacity against closed forms", 5.0, channel_capacity);
  criterion(4, "empowerment equals log2 of reachable cells", 60.0, empowerment_equivalence);
  criterion(5, "STARC invariance, symmetry and triangle inequality", 120.0, starc_invariance);
  criterion(6, "canonicalization annihilates constants", 0.0, constant_annihilation);
  criterion(7, "curiosity divergence properties", 0.0, curiosity_properties);
  criterion(8, "subspace projection rank and residual", 0.0, subspace_rank);
  criterion(9, "CLI reports are byte-identical across runs", 0.0,
            [&] { return cli_determinism(cli); });
  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
