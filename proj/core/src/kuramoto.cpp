#include "ksl/kuramoto.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "ksl/errors.hpp"

namespace ksl {

namespace {

using EdgeList = std::vector<std::pair<std::int32_t, std::int32_t>>;

void check_theta(const Graph& g, std::span<const double> theta, const char* who) {
  if (std::ssize(theta) != g.vertex_count()) {
    throw std::invalid_argument(std::string(who) + ": phase vector length must equal vertex count");
  }
}

// Kahan-compensated edge sum; the descent guard compares energies to an
// absolute 1e-9 slack, so plain summation would be too noisy on dense graphs.
double energy_on_edges(const EdgeList& edges, std::span<const double> theta) {
  double sum = 0.0, carry = 0.0;
  for (const auto& [i, j] : edges) {
    if (i == j) continue;
    const double term = 2.0 * (1.0 - std::cos(theta[i] - theta[j])) - carry;
    const double next = sum + term;
    carry = (next - sum) - term;
    sum = next;
  }
  return sum;
}

void grad_on_edges(const EdgeList& edges, std::span<const double> theta, std::span<double> out) {
  std::fill(out.begin(), out.end(), 0.0);
  for (const auto& [i, j] : edges) {
    if (i == j) continue;
    const double s = 2.0 * std::sin(theta[i] - theta[j]);
    out[i] += s;
    out[j] -= s;
  }
}

double inf_norm(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

double energy(const Graph& g, std::span<const double> theta) {
  check_theta(g, theta, "energy");
  double sum = 0.0, carry = 0.0;
  g.for_each_edge([&](std::int64_t i, std::int64_t j) {
    if (i == j) return;
    const double term =
        2.0 * (1.0 - std::cos(theta[static_cast<std::size_t>(i)] -
                              theta[static_cast<std::size_t>(j)])) -
        carry;
    const double next = sum + term;
    carry = (next - sum) - term;
    sum = next;
  });
  return sum;
}

std::vector<double> grad(const Graph& g, std::span<const double> theta) {
  check_theta(g, theta, "grad");
  std::vector<double> out(theta.size(), 0.0);
  g.for_each_edge([&](std::int64_t i, std::int64_t j) {
    if (i == j) return;
    const double s = 2.0 * std::sin(theta[static_cast<std::size_t>(i)] -
                                    theta[static_cast<std::size_t>(j)]);
    out[static_cast<std::size_t>(i)] += s;
    out[static_cast<std::size_t>(j)] -= s;
  });
  return out;
}

std::complex<double> order_parameter(std::span<const double> theta, std::int64_t k) {
  if (theta.empty()) throw std::invalid_argument("order_parameter: empty phase vector");
  if (k < 0) throw std::invalid_argument("order_parameter: k must be >= 0");
  double re = 0.0, im = 0.0;
  for (double th : theta) {
    re += std::cos(k * th);
    im += std::sin(k * th);
  }
  const double n = static_cast<double>(theta.size());
  return {re / n, im / n};
}

std::vector<double> random_phases(std::int64_t n, Rng& rng) {
  if (n < 1) throw std::invalid_argument("random_phases: n must be >= 1");
  std::vector<double> theta(static_cast<std::size_t>(n));
  for (double& th : theta) th = rng.uniform(0.0, 2.0 * std::numbers::pi);
  return theta;
}

std::vector<double> twisted_state(std::int64_t n, std::int64_t q) {
  if (n < 1) throw std::invalid_argument("twisted_state: n must be >= 1");
  std::vector<double> theta(static_cast<std::size_t>(n));
  for (std::int64_t j = 0; j < n; ++j) {
    theta[static_cast<std::size_t>(j)] =
        2.0 * std::numbers::pi * static_cast<double>(q * j) / static_cast<double>(n);
  }
  return theta;
}

EquilibriumClass classify_equilibrium(const Graph& g, std::span<const double> theta) {
  check_theta(g, theta, "classify_equilibrium");
  if (inf_norm(grad(g, theta)) >= kStationaryGradTol) return EquilibriumClass::nonstationary;
  const double rho1 = std::abs(order_parameter(theta, 1));
  return (1.0 - rho1 < kSyncRhoTol) ? EquilibriumClass::synchronized : EquilibriumClass::spurious;
}

FlowResult integrate(const Graph& g, std::span<const double> theta0,
                     const IntegrateOptions& opts) {
  check_theta(g, theta0, "integrate");
  if (opts.step < 0.0) throw std::invalid_argument("integrate: step must be positive");
  if (!(opts.t_max > 0.0)) throw std::invalid_argument("integrate: t_max must be positive");

  const EdgeList edges = g.edges();
  const std::size_t n = theta0.size();

  double h = opts.step > 0.0 ? opts.step : 0.01 / (1.0 + static_cast<double>(g.max_degree()));

  std::vector<double> theta(theta0.begin(), theta0.end());
  std::vector<double> g1(n), g2(n), g3(n), g4(n), stage(n), proposal(n);

  FlowResult result;
  double t = 0.0;
  double current_energy = energy_on_edges(edges, theta);
  grad_on_edges(edges, theta, g1);
  double grad_inf = inf_norm(g1);
  int halvings = 0;

  auto sample = [&] {
    if (opts.sample_every <= 0) return;
    if (result.steps % opts.sample_every != 0) return;
    result.trajectory.push_back(
        {t, current_energy, std::abs(order_parameter(theta, 1)), grad_inf});
  };
  sample();

  bool stationary = grad_inf < opts.stop_grad_tol;
  while (!stationary && t < opts.t_max) {
    // Classical RK4 on theta' = -grad; g1 already holds grad(theta).
    for (std::size_t i = 0; i < n; ++i) stage[i] = theta[i] - 0.5 * h * g1[i];
    grad_on_edges(edges, stage, g2);
    for (std::size_t i = 0; i < n; ++i) stage[i] = theta[i] - 0.5 * h * g2[i];
    grad_on_edges(edges, stage, g3);
    for (std::size_t i = 0; i < n; ++i) stage[i] = theta[i] - h * g3[i];
    grad_on_edges(edges, stage, g4);
    for (std::size_t i = 0; i < n; ++i) {
      proposal[i] = theta[i] - h / 6.0 * (g1[i] + 2.0 * g2[i] + 2.0 * g3[i] + g4[i]);
    }

    const double proposed_energy = energy_on_edges(edges, proposal);
    if (proposed_energy > current_energy + kEnergyDescentSlack) {
      if (++halvings > opts.max_halvings) {
        throw integration_failure("integrate: step size underflow, energy will not descend");
      }
      h *= 0.5;
      continue;
    }

    theta.swap(proposal);
    t += h;
    ++result.steps;
    current_energy = proposed_energy;
    grad_on_edges(edges, theta, g1);
    grad_inf = inf_norm(g1);
    sample();
    stationary = grad_inf < opts.stop_grad_tol;
  }

  result.halvings = halvings;
  result.final_energy = current_energy;
  result.final_grad_inf_norm = grad_inf;
  result.final_rho1_abs = std::abs(order_parameter(theta, 1));
  if (!stationary) {
    result.status = FlowStatus::nonconverged;
  } else {
    switch (classify_equilibrium(g, theta)) {
      case EquilibriumClass::synchronized:
        result.status = FlowStatus::synchronized;
        break;
      case EquilibriumClass::spurious:
        result.status = FlowStatus::spurious;
        break;
      case EquilibriumClass::nonstationary:
        // stop_grad_tol was looser than the classification tolerance
        result.status = FlowStatus::nonconverged;
        break;
    }
  }
  result.final = PhaseState{std::move(theta), t};
  return result;
}

}  // namespace ksl
