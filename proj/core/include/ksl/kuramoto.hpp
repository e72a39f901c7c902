#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "ksl/graph.hpp"
#include "ksl/rng.hpp"

namespace ksl {

/// Classification thresholds: a state is stationary when the gradient
/// infinity-norm is below kStationaryGradTol, and a stationary state counts
/// as synchronized when 1 - |rho_1| < kSyncRhoTol. These are an
/// operationalization chosen so the benchmark landscapes (complete graphs,
/// twisted cycles) are decisively classified; they are configuration, not a
/// mathematical definition of synchronization.
inline constexpr double kStationaryGradTol = 1e-8;
inline constexpr double kSyncRhoTol = 1e-6;

/// Per-step slack for the energy descent guard in the integrator.
inline constexpr double kEnergyDescentSlack = 1e-9;

/// Oscillator phases (radians, stored unwrapped) plus elapsed flow time.
struct PhaseState {
  std::vector<double> theta;
  double t = 0.0;
};

/// Coupling energy sum_{i,j} a_ij (1 - cos(theta_i - theta_j)) over ordered
/// pairs: each edge contributes twice. Nonnegative; zero iff all phase
/// differences across edges vanish mod 2pi.
double energy(const Graph& g, std::span<const double> theta);

/// Gradient of the ordered-pair energy: component i equals
/// 2 sum_j a_ij sin(theta_i - theta_j). Components sum to zero up to
/// rounding (global rotation invariance).
std::vector<double> grad(const Graph& g, std::span<const double> theta);

/// Complex order parameter rho_k = (1/n) sum_j exp(i k theta_j); |rho_k| <= 1
/// and rho_0 = 1.
std::complex<double> order_parameter(std::span<const double> theta, std::int64_t k);

/// i.i.d. uniform phases on [0, 2pi).
std::vector<double> random_phases(std::int64_t n, Rng& rng);

/// theta_j = 2 pi q j / n, a stationary point of the energy on the cycle C_n.
std::vector<double> twisted_state(std::int64_t n, std::int64_t q);

enum class EquilibriumClass { synchronized, spurious, nonstationary };

/// nonstationary if the gradient infinity-norm is >= kStationaryGradTol;
/// otherwise synchronized when 1 - |rho_1| < kSyncRhoTol, else spurious.
EquilibriumClass classify_equilibrium(const Graph& g, std::span<const double> theta);

enum class FlowStatus { synchronized, spurious, nonconverged };

struct TrajectoryPoint {
  double t = 0.0;
  double energy = 0.0;
  double rho1_abs = 0.0;
  double grad_inf = 0.0;
};

struct FlowResult {
  PhaseState final;
  FlowStatus status = FlowStatus::nonconverged;
  std::int64_t steps = 0;
  std::int64_t halvings = 0;
  double final_energy = 0.0;
  double final_grad_inf_norm = 0.0;
  double final_rho1_abs = 0.0;
  std::vector<TrajectoryPoint> trajectory;  // sampled (t, E, |rho_1|, |grad|_inf)
};

struct IntegrateOptions {
  double step = 0.0;            // 0 selects 0.01 / (1 + max degree)
  double t_max = 1e4;
  double stop_grad_tol = kStationaryGradTol;
  std::int64_t sample_every = 0;  // 0 disables trajectory sampling
  int max_halvings = 40;
};

/// Integrates the gradient flow theta' = -grad with classical RK4 at a fixed
/// step. Every accepted step must not increase the energy by more than
/// kEnergyDescentSlack; a violating step halves the step size and retries
/// (the descent property doubles as an error monitor for a gradient flow).
/// Stops when the gradient infinity-norm falls below stop_grad_tol
/// (stationary; classified synchronized or spurious) or when t reaches t_max
/// (nonconverged). Throws integration_failure after max_halvings halvings.
/// Deterministic: no randomness is consumed.
FlowResult integrate(const Graph& g, std::span<const double> theta0,
                     const IntegrateOptions& opts = {});

}  // namespace ksl
