#include "ksl/sphere.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "ksl/errors.hpp"

namespace ksl {

namespace {

// sin(phi)^expn, evaluated in log space so large exponents degrade gracefully
// to zero instead of polluting the quadrature with denormals.
double sin_pow(double phi, double expn) {
  if (expn == 0.0) return 1.0;
  const double s = std::sin(phi);
  if (s <= 0.0) return 0.0;
  return std::exp(expn * std::log(s));
}

struct Simpson {
  double expn;
  double eps;

  double f(double x) const { return sin_pow(x, expn); }

  // Recursive adaptive Simpson with Richardson correction.
  double refine(double a, double b, double fa, double fm, double fb, double whole, double tol,
                int depth) const {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double split = left + right;
    if (depth <= 0 || std::abs(split - whole) <= 15.0 * tol) {
      return split + (split - whole) / 15.0;
    }
    return refine(a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           refine(m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
  }

  double integrate(double a, double b) const {
    if (!(b > a)) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a);
    const double fm = f(m);
    const double fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return refine(a, b, fa, fm, fb, whole, eps, 48);
  }
};

// Integral of sin(phi)^(d-2) over [lo, hi] within [0, pi]. The integrand
// peaks at pi/2 with width ~1/sqrt(d), so the interval is pre-split into
// panels that shrink geometrically toward pi/2 before adapting; a single
// adaptive pass starting from one panel can miss a narrow peak entirely.
double sin_power_integral(std::int64_t d, double lo, double hi, double eps) {
  const double half_pi = std::numbers::pi / 2.0;
  const double width = 1.0 / std::sqrt(static_cast<double>(std::max<std::int64_t>(d, 3)));

  std::vector<double> cuts;
  cuts.push_back(lo);
  cuts.push_back(hi);
  for (double w = width; w < std::numbers::pi; w *= 2.0) {
    for (double c : {half_pi - w, half_pi + w}) {
      if (c > lo && c < hi) cuts.push_back(c);
    }
  }
  if (half_pi > lo && half_pi < hi) cuts.push_back(half_pi);
  std::sort(cuts.begin(), cuts.end());

  const Simpson quad{static_cast<double>(d - 2), eps / static_cast<double>(cuts.size())};
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    total += quad.integrate(cuts[i], cuts[i + 1]);
  }
  return total;
}

double tail_mass(std::int64_t d, double phi_t, double eps) {
  return sin_power_integral(d, 0.0, phi_t, eps);
}

double quadrature_eps(std::int64_t d) {
  // Scale the absolute tolerance to the magnitude of the full integral,
  // which shrinks like sqrt(2*pi/d).
  const double scale =
      std::min(std::numbers::pi, std::sqrt(2.0 * std::numbers::pi / std::max<std::int64_t>(1, d - 2)));
  return 1e-12 * scale;
}

}  // namespace

PointCloud sample_sphere_points(std::int64_t n, std::int64_t d, Rng& rng) {
  if (n < 1) throw std::invalid_argument("sample_sphere_points: n must be >= 1");
  if (d < 2) throw std::invalid_argument("sample_sphere_points: d must be >= 2");

  PointCloud cloud;
  cloud.coords.resize(n, d);
  for (std::int64_t i = 0; i < n; ++i) {
    double norm2 = 0.0;
    do {
      norm2 = 0.0;
      for (std::int64_t k = 0; k < d; ++k) {
        const double x = rng.normal();
        cloud.coords(i, k) = x;
        norm2 += x * x;
      }
    } while (norm2 < 1e-200);
    cloud.coords.row(i) /= std::sqrt(norm2);
  }
  return cloud;
}

double inner_product_cdf(double t, std::int64_t d) {
  if (d < 2) throw std::invalid_argument("inner_product_cdf: d must be >= 2");
  if (!(t >= -1.0 && t <= 1.0)) {
    throw std::invalid_argument("inner_product_cdf: t must lie in [-1, 1]");
  }
  if (t == -1.0) return 1.0;
  if (t == 1.0) return 0.0;

  const double eps = quadrature_eps(d);
  const double phi_t = std::acos(t);
  const double numer = tail_mass(d, phi_t, eps);
  const double denom = sin_power_integral(d, 0.0, std::numbers::pi, eps);
  return std::clamp(numer / denom, 0.0, 1.0);
}

Threshold connection_threshold(double p, std::int64_t d) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::invalid_argument("connection_threshold: p must lie in (0, 1)");
  }
  if (d < 2) throw std::invalid_argument("connection_threshold: d must be >= 2");

  const double eps = quadrature_eps(d);
  const double denom = sin_power_integral(d, 0.0, std::numbers::pi, eps);

  // cdf(t) is decreasing in t: keep cdf(lo) >= p >= cdf(hi).
  double lo = -1.0, hi = 1.0;
  double mid = 0.0;
  for (int iter = 0; iter < 90; ++iter) {
    mid = 0.5 * (lo + hi);
    const double c = tail_mass(d, std::acos(mid), eps) / denom;
    if (std::abs(c - p) <= 1e-11 || hi - lo < 1e-14) break;
    if (c > p) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return Threshold{p, d, mid};
}

void save_points(const PointCloud& cloud, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("save_points: cannot open " + path);
  out << cloud.size() << ' ' << cloud.dim() << '\n';
  char buf[64];
  for (std::int64_t i = 0; i < cloud.size(); ++i) {
    for (std::int64_t k = 0; k < cloud.dim(); ++k) {
      auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), cloud.coords(i, k));
      if (k > 0) out << ' ';
      out.write(buf, end - buf);
    }
    out << '\n';
  }
  if (!out) throw std::runtime_error("save_points: write failed for " + path);
}

PointCloud load_points(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parse_error("load_points: cannot open " + path, 0);

  std::string line;
  if (!std::getline(in, line)) throw parse_error("load_points: missing header", 1);
  std::istringstream header(line);
  std::int64_t n = 0, d = 0;
  std::string extra;
  if (!(header >> n >> d) || (header >> extra) || n < 1 || d < 2) {
    throw parse_error("load_points: malformed header, expected \"n d\"", 1);
  }

  PointCloud cloud;
  cloud.coords.resize(n, d);
  for (std::int64_t i = 0; i < n; ++i) {
    const std::size_t lineno = static_cast<std::size_t>(i) + 2;
    if (!std::getline(in, line)) throw parse_error("load_points: truncated file", lineno);
    std::istringstream row(line);
    for (std::int64_t k = 0; k < d; ++k) {
      if (!(row >> cloud.coords(i, k))) {
        throw parse_error("load_points: malformed coordinate row", lineno);
      }
    }
    if (row >> extra) throw parse_error("load_points: too many coordinates", lineno);
  }
  return cloud;
}

}  // namespace ksl
