#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>

#include "ksl/rng.hpp"

namespace ksl {

/// Latent positions of a geometric graph: n unit vectors in R^d, one per row.
struct PointCloud {
  using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

  Matrix coords;

  std::int64_t size() const { return coords.rows(); }
  std::int64_t dim() const { return coords.cols(); }
};

/// Connection threshold t such that P(<X,Y> >= t) = p for X, Y independent
/// uniform points on S^{d-1}.
struct Threshold {
  double p = 0.0;
  std::int64_t d = 0;
  double t = 0.0;
};

/// Samples n i.i.d. uniform points on S^{d-1} (d independent normals per
/// point, normalized). Rows have unit norm to within 1e-12.
/// Throws std::invalid_argument for n < 1 or d < 2.
PointCloud sample_sphere_points(std::int64_t n, std::int64_t d, Rng& rng);

/// Upper tail P(<X,Y> >= t) of the inner product of two independent uniform
/// points on S^{d-1}. The inner product has density proportional to
/// (1-s^2)^((d-3)/2) on [-1,1]; the integral is evaluated in the angle
/// variable s = cos(phi), where the integrand sin(phi)^(d-2) is smooth for
/// every d >= 2. Absolute accuracy ~1e-12, comfortably inside the documented
/// 1e-10 budget. Throws std::invalid_argument for t outside [-1,1] or d < 2.
double inner_product_cdf(double t, std::int64_t d);

/// Inverts inner_product_cdf by bisection: |cdf(t) - p| <= 1e-10.
/// Throws std::invalid_argument unless 0 < p < 1 and d >= 2.
Threshold connection_threshold(double p, std::int64_t d);

/// Plain-text dump: header line "n d", then one point per line,
/// space-separated decimals with round-trip precision.
void save_points(const PointCloud& cloud, const std::string& path);
PointCloud load_points(const std::string& path);

}  // namespace ksl
