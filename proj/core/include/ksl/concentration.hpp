#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ksl/graph.hpp"
#include "ksl/rng.hpp"

namespace ksl {

/// One measured statistic from a concentration experiment, together with the
/// reference bound it was compared against and the formula used, so CSV rows
/// are self-describing.
struct ConcentrationSample {
  std::int64_t trial = 0;
  std::uint64_t seed = 0;
  std::string statistic;
  double observed = 0.0;
  double bound = 0.0;
  bool bound_satisfied = false;
  bool hypothesis_ok = true;
  std::string formula;
};

/// Coupling half-width epsilon = max(C_eps / sqrt(C_d), 6) * sqrt(2 / (n p)),
/// plus two derived flags: whether epsilon dominates
/// C_eps * sqrt((n p + log n) log^4 n / d), and whether the value is vacuous
/// (epsilon >= 1, so p(1 - epsilon) is no longer a probability).
struct EpsilonParams {
  std::int64_t n = 0;
  double p = 0.0;
  std::int64_t d = 0;
  double C_eps = 1.0;
  double C_d = 1.0;
  double epsilon = 0.0;
  bool side_inequality_holds = false;
  bool vacuous = false;
};

/// Requires n p > 0 and C_d > 0.
EpsilonParams epsilon_of(std::int64_t n, double p, std::int64_t d, double C_eps = 1.0,
                         double C_d = 1.0);

/// Samples `trials` graphs G(n,p) with Bernoulli(p) self-loops (so E A = p J
/// exactly) and records the ratio |A - E A| / sqrt(n p (1-p)) per trial; the
/// measured constant of the adjacency deviation bound. The recorded reference
/// bound is the ratio ceiling 2.5. The hypothesis flag notes whether
/// n p > log n; a violation still runs and is only flagged.
std::vector<ConcentrationSample> adjacency_concentration(std::int64_t n, double p,
                                                         std::int64_t trials, std::uint64_t seed,
                                                         double norm_tol = 1e-4);

/// max_i |deg_i - n p| against the reference deviation sqrt(n p) * log n.
/// Trial and seed fields are left for the caller to fill.
ConcentrationSample degree_concentration(const Graph& g, double p);

/// Monotone coupling of two Erdos-Renyi graphs: one uniform draw per pair
/// puts the edge in both graphs when U < p(1-eps) and only in the second when
/// U < p(1+eps). Marginals are exactly G(n, p(1-eps)) and G(n, p(1+eps)) and
/// the first graph is always a subgraph of the second. Requires eps >= 0 and
/// p(1+eps) <= 1. With self_loops the diagonal is coupled the same way.
std::pair<Graph, Graph> sample_coupled_er(std::int64_t n, double p, double eps, Rng& rng,
                                          bool self_loops = false);

/// Checks v^T L(g_minus) v <= v^T L(g) v <= v^T L(g_plus) v for num_vectors
/// random Gaussian vectors, with slack 1e-12 relative to the largest form.
/// The nesting g_minus <= g <= g_plus is a precondition; violations throw
/// std::invalid_argument.
bool sandwich_quadratic_check(const Graph& g_minus, const Graph& g, const Graph& g_plus,
                              std::int64_t num_vectors, Rng& rng);

}  // namespace ksl
