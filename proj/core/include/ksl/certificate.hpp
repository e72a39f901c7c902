#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ksl/graph.hpp"
#include "ksl/rng.hpp"

namespace ksl {

/// out = (A - p0 J) v without materializing J: one adjacency matvec plus a
/// rank-one correction by the coordinate sum of v.
void centered_adjacency_matvec(const Graph& g, double p0, std::span<const double> v,
                               std::span<double> out);
std::vector<double> centered_adjacency_matvec(const Graph& g, double p0,
                                              std::span<const double> v);

/// out = (L + p0 J - n p0 I) v with L v computed as deg(v) - A v.
void centered_laplacian_matvec(const Graph& g, double p0, std::span<const double> v,
                               std::span<double> out);
std::vector<double> centered_laplacian_matvec(const Graph& g, double p0,
                                              std::span<const double> v);

using SymmetricOperator = std::function<void(std::span<const double>, std::span<double>)>;

/// Spectral norm max(|lambda_min|, |lambda_max|) of a symmetric operator via
/// power iteration on the squared operator (two applications per step), with
/// a random unit start and Rayleigh-quotient stopping.
///
/// The Rayleigh quotients rho_k = |M v_k|^2 are non-decreasing; the remaining
/// gap to the top eigenvalue is estimated from the geometric decay of the
/// increments (Aitken extrapolation) and iteration stops once the estimated
/// relative error drops below tol. max_iter = 0 selects the default
/// min(10 n, 5000). Throws convergence_failure carrying the last Rayleigh
/// estimate -- a certified lower bound -- when the budget runs out.
double spectral_norm(const SymmetricOperator& op, std::int64_t n, double tol, std::int64_t max_iter,
                     Rng& rng);

enum class Verdict { certified, inconclusive };

/// Outcome of the three-condition synchronization check. cond3_lhs is absent
/// when 12 * ratio_a exceeds 1 (the arcsine is undefined; condition 1 already
/// failed); cond3_rhs is absent when the denominator log(n p0 / (2 |dL|) - 1)
/// is nonpositive. A zero |dL| gives rhs = 1 (the denominator diverges).
struct CertificateReport {
  std::int64_t n = 0;
  double p0 = 0.0;
  double norm_delta_a = 0.0;
  double norm_delta_l = 0.0;
  double ratio_a = 0.0;
  double ratio_l = 0.0;
  bool cond1 = false;
  bool cond2 = false;
  bool cond3 = false;
  std::optional<double> cond3_lhs;
  std::optional<double> cond3_rhs;
  Verdict verdict = Verdict::inconclusive;
  bool selfloop_convention = false;
  double norm_tolerance = 0.0;
};

/// Evaluates the three conditions from (n, p0) and the two operator norms.
/// Exposed separately so the edge-case rules can be tested without sampling.
CertificateReport evaluate_conditions(std::int64_t n, double p0, double norm_a, double norm_l);

/// Runs the full certificate on a graph: spectral norms of the centered
/// adjacency and centered Laplacian at reference density p0, then the three
/// conditions. A "certified" verdict asserts global synchronization of the
/// homogeneous Kuramoto flow on g; "inconclusive" asserts nothing.
///
/// Requires n >= 7 (condition 3 needs log(n/6) > 0) and p0 in (0, 1]. If a
/// norm estimate fails to converge, the reported value is its certified lower
/// bound and the affected conditions are left false, so the verdict can only
/// err toward "inconclusive".
CertificateReport check_certificate(const Graph& g, double p0, double tol = 1e-6);

/// Smallest signed slack over the three conditions; negative iff
/// inconclusive. -inf when a condition-3 term is undefined.
double certificate_margin(const CertificateReport& report);

/// Flat JSON object with keys matching the report fields. Undefined
/// condition-3 terms serialize as the strings "undefined" /
/// "denominator-nonpositive"; an infinite lhs serializes as "infinity".
std::string to_json(const CertificateReport& report);

}  // namespace ksl
