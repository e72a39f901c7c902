#include "ksl/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "ksl/errors.hpp"

namespace ksl {

Graph::Graph(std::int64_t n, bool self_loops)
    : n_(n), words_((n + 63) / 64), self_loops_(self_loops) {
  if (n < 1) throw std::invalid_argument("Graph: n must be >= 1");
  bits_.assign(static_cast<std::size_t>(n_ * words_), 0);
  degrees_.assign(static_cast<std::size_t>(n_), 0);
}

Graph Graph::complete(std::int64_t n, bool self_loops) {
  Graph g(n, self_loops);
  for (std::int64_t i = 0; i < n; ++i) {
    for (std::int64_t j = i + (self_loops ? 0 : 1); j < n; ++j) g.add_edge(i, j);
  }
  return g;
}

Graph Graph::cycle(std::int64_t n) {
  if (n < 3) throw std::invalid_argument("Graph::cycle: n must be >= 3");
  Graph g(n);
  for (std::int64_t i = 0; i < n; ++i) g.add_edge(i, (i + 1) % n);
  return g;
}

Graph Graph::path(std::int64_t n) {
  Graph g(n);
  for (std::int64_t i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1);
  return g;
}

void Graph::check_vertex(std::int64_t i) const {
  if (i < 0 || i >= n_) throw std::invalid_argument("Graph: vertex index out of range");
}

bool Graph::has_edge(std::int64_t i, std::int64_t j) const {
  check_vertex(i);
  check_vertex(j);
  return (row_ptr(i)[j / 64] >> (j % 64)) & 1ULL;
}

void Graph::add_edge(std::int64_t i, std::int64_t j) {
  check_vertex(i);
  check_vertex(j);
  if (i == j && !self_loops_) {
    throw std::invalid_argument("Graph: self-loop on a graph with self_loops = false");
  }
  if (has_edge(i, j)) return;
  row_ptr(i)[j / 64] |= 1ULL << (j % 64);
  row_ptr(j)[i / 64] |= 1ULL << (i % 64);
  ++degrees_[static_cast<std::size_t>(i)];
  if (i != j) ++degrees_[static_cast<std::size_t>(j)];
  ++edge_count_;
}

std::int64_t Graph::degree(std::int64_t i) const {
  check_vertex(i);
  return degrees_[static_cast<std::size_t>(i)];
}

std::int64_t Graph::max_degree() const {
  std::int64_t m = 0;
  for (auto d : degrees_) m = std::max<std::int64_t>(m, d);
  return m;
}

std::vector<std::pair<std::int32_t, std::int32_t>> Graph::edges() const {
  std::vector<std::pair<std::int32_t, std::int32_t>> out;
  out.reserve(static_cast<std::size_t>(edge_count_));
  for_each_edge([&](std::int64_t i, std::int64_t j) {
    out.emplace_back(static_cast<std::int32_t>(i), static_cast<std::int32_t>(j));
  });
  return out;
}

void Graph::adj_matvec(std::span<const double> v, std::span<double> out) const {
  if (std::ssize(v) != n_ || std::ssize(out) != n_) {
    throw std::invalid_argument("adj_matvec: vector length must equal vertex count");
  }
  for (std::int64_t i = 0; i < n_; ++i) {
    const std::uint64_t* row = row_ptr(i);
    double acc = 0.0;
    for (std::int64_t w = 0; w < words_; ++w) {
      std::uint64_t bits = row[w];
      const double* base = v.data() + w * 64;
      while (bits != 0) {
        acc += base[__builtin_ctzll(bits)];
        bits &= bits - 1;
      }
    }
    out[static_cast<std::size_t>(i)] = acc;
  }
}

std::span<const std::uint64_t> Graph::row(std::int64_t i) const {
  check_vertex(i);
  return {row_ptr(i), static_cast<std::size_t>(words_)};
}

bool Graph::operator==(const Graph& other) const {
  return n_ == other.n_ && self_loops_ == other.self_loops_ && bits_ == other.bits_;
}

namespace {

// Visits the pairs selected by independent Bernoulli(p) over a linear index
// range of `total` items, skipping geometrically between hits.
template <class F>
void bernoulli_subset(std::int64_t total, double p, Rng& rng, F&& hit) {
  if (total <= 0 || p <= 0.0) return;
  if (p >= 1.0) {
    for (std::int64_t k = 0; k < total; ++k) hit(k);
    return;
  }
  const double log1mp = std::log1p(-p);
  std::int64_t k = -1;
  while (true) {
    const double u = 1.0 - rng.next_unit();  // (0, 1]
    const double jump = std::floor(std::log(u) / log1mp);
    if (jump > static_cast<double>(total)) break;
    k += 1 + static_cast<std::int64_t>(jump);
    if (k >= total) break;
    hit(k);
  }
}

// Linear index of the pair {i, j}, i < j, in lexicographic order.
std::pair<std::int64_t, std::int64_t> pair_from_index(std::int64_t n, std::int64_t k) {
  // Row i starts at offset i*n - i*(i+1)/2 - i ... solved by scanning rows;
  // binary search keeps it O(log n).
  std::int64_t lo = 0, hi = n - 1;
  auto row_start = [n](std::int64_t i) { return i * (2 * n - i - 1) / 2; };
  while (lo < hi) {
    const std::int64_t mid = (lo + hi + 1) / 2;
    if (row_start(mid) <= k) {
      lo = mid;
    } else {
      hi = mid - 1;
    }
  }
  const std::int64_t i = lo;
  const std::int64_t j = i + 1 + (k - row_start(i));
  return {i, j};
}

}  // namespace

Graph sample_er(std::int64_t n, double p, Rng& rng, bool self_loops) {
  if (n < 1) throw std::invalid_argument("sample_er: n must be >= 1");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("sample_er: p must lie in [0, 1]");

  Graph g(n, self_loops);
  const std::int64_t pairs = n * (n - 1) / 2;
  bernoulli_subset(pairs, p, rng, [&](std::int64_t k) {
    const auto [i, j] = pair_from_index(n, k);
    g.add_edge(i, j);
  });
  if (self_loops) {
    bernoulli_subset(n, p, rng, [&](std::int64_t i) { g.add_edge(i, i); });
  }
  return g;
}

Graph rgg_from_cloud(const PointCloud& cloud, double p, bool self_loops) {
  const std::int64_t n = cloud.size();
  const Threshold th = connection_threshold(p, cloud.dim());

  Graph g(n, self_loops);
  // Gram rows in blocks: block x remainder product, keeping the j > i part.
  constexpr std::int64_t kBlock = 256;
  Eigen::MatrixXd prod;
  for (std::int64_t a = 0; a < n; a += kBlock) {
    const std::int64_t rows = std::min(kBlock, n - a);
    prod.noalias() = cloud.coords.middleRows(a, rows) *
                     cloud.coords.bottomRows(n - a).transpose();
    for (std::int64_t i = a; i < a + rows; ++i) {
      for (std::int64_t j = i + 1; j < n; ++j) {
        if (prod(i - a, j - a) >= th.t) g.add_edge(i, j);
      }
    }
  }
  if (self_loops) {
    for (std::int64_t i = 0; i < n; ++i) g.add_edge(i, i);
  }
  return g;
}

std::pair<Graph, PointCloud> sample_rgg(std::int64_t n, double p, std::int64_t d, Rng& rng,
                                        bool self_loops) {
  if (n < 1) throw std::invalid_argument("sample_rgg: n must be >= 1");
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("sample_rgg: p must lie in (0, 1)");
  if (d < 2) throw std::invalid_argument("sample_rgg: d must be >= 2");

  PointCloud cloud = sample_sphere_points(n, d, rng);
  Graph g = rgg_from_cloud(cloud, p, self_loops);
  return {std::move(g), std::move(cloud)};
}

double laplacian_quadratic(const Graph& g, std::span<const double> v) {
  if (std::ssize(v) != g.vertex_count()) {
    throw std::invalid_argument("laplacian_quadratic: vector length must equal vertex count");
  }
  // Kahan compensation keeps the sum accurate enough for tight sandwich
  // comparisons on graphs with ~1e5 edges.
  double sum = 0.0, carry = 0.0;
  g.for_each_edge([&](std::int64_t i, std::int64_t j) {
    if (i == j) return;
    const double diff = v[static_cast<std::size_t>(i)] - v[static_cast<std::size_t>(j)];
    const double term = diff * diff - carry;
    const double next = sum + term;
    carry = (next - sum) - term;
    sum = next;
  });
  return sum;
}

bool is_connected(const Graph& g) {
  const std::int64_t n = g.vertex_count();
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  std::vector<std::int64_t> stack{0};
  seen[0] = 1;
  std::int64_t visited = 1;
  while (!stack.empty()) {
    const std::int64_t i = stack.back();
    stack.pop_back();
    const auto row = g.row(i);
    for (std::size_t w = 0; w < row.size(); ++w) {
      std::uint64_t bits = row[w];
      while (bits != 0) {
        const std::int64_t j = static_cast<std::int64_t>(w) * 64 + __builtin_ctzll(bits);
        bits &= bits - 1;
        if (!seen[static_cast<std::size_t>(j)]) {
          seen[static_cast<std::size_t>(j)] = 1;
          ++visited;
          stack.push_back(j);
        }
      }
    }
  }
  return visited == n;
}

bool subgraph_of(const Graph& g1, const Graph& g2) {
  if (g1.vertex_count() != g2.vertex_count()) {
    throw std::invalid_argument("subgraph_of: vertex counts differ");
  }
  for (std::int64_t i = 0; i < g1.vertex_count(); ++i) {
    const auto r1 = g1.row(i);
    const auto r2 = g2.row(i);
    for (std::size_t w = 0; w < r1.size(); ++w) {
      if ((r1[w] & ~r2[w]) != 0) return false;
    }
  }
  return true;
}

void save_graph(const Graph& g, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("save_graph: cannot open " + path);
  out << g.vertex_count() << ' ' << g.edge_count() << ' ' << (g.self_loops() ? 1 : 0) << '\n';
  g.for_each_edge([&](std::int64_t i, std::int64_t j) { out << i << ' ' << j << '\n'; });
  if (!out) throw std::runtime_error("save_graph: write failed for " + path);
}

Graph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parse_error("load_graph: cannot open " + path, 0);

  std::string line;
  if (!std::getline(in, line)) throw parse_error("load_graph: missing header", 1);
  std::istringstream header(line);
  std::int64_t n = 0, m = 0;
  int loops_flag = 0;
  std::string extra;
  if (!(header >> n >> m >> loops_flag) || (header >> extra) || n < 1 || m < 0 ||
      (loops_flag != 0 && loops_flag != 1)) {
    throw parse_error("load_graph: malformed header, expected \"n m self_loops\"", 1);
  }

  Graph g(n, loops_flag == 1);
  for (std::int64_t e = 0; e < m; ++e) {
    const std::size_t lineno = static_cast<std::size_t>(e) + 2;
    if (!std::getline(in, line)) throw parse_error("load_graph: truncated edge list", lineno);
    std::istringstream row(line);
    std::int64_t i = 0, j = 0;
    if (!(row >> i >> j) || (row >> extra)) {
      throw parse_error("load_graph: malformed edge line, expected \"i j\"", lineno);
    }
    if (i < 0 || j < 0 || i >= n || j >= n) {
      throw parse_error("load_graph: vertex index out of range", lineno);
    }
    if (i == j && loops_flag == 0) {
      throw parse_error("load_graph: self-loop in a graph declared without self-loops", lineno);
    }
    if (i > j) throw parse_error("load_graph: edges must satisfy i <= j", lineno);
    if (g.has_edge(i, j)) throw parse_error("load_graph: duplicate edge", lineno);
    g.add_edge(i, j);
  }
  if (std::getline(in, line) && !line.empty()) {
    throw parse_error("load_graph: trailing content after edge list",
                      static_cast<std::size_t>(m) + 2);
  }
  return g;
}

}  // namespace ksl
