#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ksl/rng.hpp"
#include "ksl/sphere.hpp"

namespace ksl {

/// Simple undirected graph stored as packed bit-rows with a cached degree
/// vector. Row i is the neighborhood indicator of vertex i; adjacency is kept
/// symmetric by construction. With self_loops enabled the diagonal bit may be
/// set and counts once toward the degree. Immutable by convention once a
/// sampler or loader returns it, so it is safe to share read-only across
/// worker threads.
class Graph {
 public:
  explicit Graph(std::int64_t n, bool self_loops = false);

  static Graph complete(std::int64_t n, bool self_loops = false);
  static Graph cycle(std::int64_t n);
  static Graph path(std::int64_t n);

  std::int64_t vertex_count() const noexcept { return n_; }
  bool self_loops() const noexcept { return self_loops_; }
  std::int64_t edge_count() const noexcept { return edge_count_; }

  bool has_edge(std::int64_t i, std::int64_t j) const;

  /// Inserts the undirected edge {i,j}; i == j requires self_loops.
  /// Inserting an existing edge is a no-op.
  void add_edge(std::int64_t i, std::int64_t j);

  std::int64_t degree(std::int64_t i) const;
  const std::vector<std::int32_t>& degrees() const noexcept { return degrees_; }
  std::int64_t max_degree() const;

  /// Edge list with i <= j (i == j only for self-loops), sorted.
  std::vector<std::pair<std::int32_t, std::int32_t>> edges() const;

  /// Calls f(i, j) for every stored edge with i <= j.
  template <class F>
  void for_each_edge(F&& f) const {
    for (std::int64_t i = 0; i < n_; ++i) {
      const std::uint64_t* row = row_ptr(i);
      for (std::int64_t w = i / 64; w < words_; ++w) {
        std::uint64_t bits = row[w];
        if (w == i / 64) bits &= ~0ULL << (i % 64);  // keep j >= i
        while (bits != 0) {
          const std::int64_t j = w * 64 + __builtin_ctzll(bits);
          f(i, j);
          bits &= bits - 1;
        }
      }
    }
  }

  /// out = A v, using the stored bits (diagonal included when present).
  void adj_matvec(std::span<const double> v, std::span<double> out) const;

  std::span<const std::uint64_t> row(std::int64_t i) const;

  bool operator==(const Graph& other) const;

 private:
  const std::uint64_t* row_ptr(std::int64_t i) const { return bits_.data() + i * words_; }
  std::uint64_t* row_ptr(std::int64_t i) { return bits_.data() + i * words_; }
  void check_vertex(std::int64_t i) const;

  std::int64_t n_;
  std::int64_t words_;
  bool self_loops_;
  std::int64_t edge_count_ = 0;
  std::vector<std::uint64_t> bits_;
  std::vector<std::int32_t> degrees_;
};

/// Where a graph came from; echoed as a JSON sidecar next to saved graphs so
/// downstream commands can recover the sampling parameters.
struct GraphProvenance {
  enum class Model { er, rgg, file };

  Model model = Model::file;
  std::int64_t n = 0;
  double p = 0.0;
  std::optional<std::int64_t> d;      // RGG only
  std::uint64_t seed = 0;
  std::optional<double> threshold_t;  // RGG only
  bool self_loops = false;
};

/// G(n,p): each unordered pair present independently with probability p.
/// With self_loops, diagonal entries are independent Bernoulli(p) as well, so
/// that E A = p J exactly.
Graph sample_er(std::int64_t n, double p, Rng& rng, bool self_loops = false);

/// G(n,p,d): edge {i,j} iff <X_i, X_j> >= t_{p,d} for latent uniform sphere
/// points X. With self_loops the diagonal is all ones (<X_i, X_i> = 1).
/// Returns the latent cloud for reproducibility.
std::pair<Graph, PointCloud> sample_rgg(std::int64_t n, double p, std::int64_t d, Rng& rng,
                                        bool self_loops = false);

/// Thresholds an existing cloud at t_{p,d}; used to build nested graphs from
/// one latent sample.
Graph rgg_from_cloud(const PointCloud& cloud, double p, bool self_loops = false);

/// Sum over edges of (v_i - v_j)^2 == v^T L v; never negative. Self-loops
/// contribute nothing.
double laplacian_quadratic(const Graph& g, std::span<const double> v);

bool is_connected(const Graph& g);

/// True iff every edge of g1 is an edge of g2 (same vertex count required).
bool subgraph_of(const Graph& g1, const Graph& g2);

/// Edge-list file: line 1 "n m self_loops(0|1)", then m lines "i j" with
/// 0-indexed i < j (i == j allowed when self_loops = 1), ASCII decimal, LF.
void save_graph(const Graph& g, const std::string& path);
Graph load_graph(const std::string& path);

}  // namespace ksl
