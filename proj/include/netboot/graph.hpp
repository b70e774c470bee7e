#pragma once

// Weighted undirected networks, shortest-path distances and the
// neighbourhood-size ("denseness") measures built on top of them.
//
// Node indices are 0-based throughout the C++ API; the text formats in
// io.hpp are 1-based.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace netboot {

enum class WeightMode { unit, intensity };

struct Edge {
  std::size_t u = 0;
  std::size_t v = 0;
  double weight = 1.0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Validated weighted undirected graph. Edges are stored with u < v and
/// sorted lexicographically.
class Network {
 public:
  /// Throws Error on self-loops, duplicate undirected edges, out-of-range
  /// endpoints, or a weight outside (0, 1] (exactly 1 in unit mode).
  static Network build(std::size_t node_count, std::vector<Edge> edges, WeightMode mode);

  std::size_t node_count() const noexcept { return node_count_; }
  std::span<const Edge> edges() const noexcept { return edges_; }
  WeightMode weight_mode() const noexcept { return mode_; }

  std::vector<std::size_t> degrees() const;

 private:
  Network(std::size_t n, std::vector<Edge> edges, WeightMode mode)
      : node_count_(n), edges_(std::move(edges)), mode_(mode) {}

  std::size_t node_count_;
  std::vector<Edge> edges_;
  WeightMode mode_;
};

inline Network build_network(std::size_t node_count, std::vector<Edge> edges, WeightMode mode) {
  return Network::build(node_count, std::move(edges), mode);
}

/// Dense symmetric matrix of pairwise distances. Off-diagonal entries are
/// either >= 1 or infinite (disconnected pair).
class DistanceMatrix {
 public:
  static constexpr double kInfinity = std::numeric_limits<double>::infinity();

  DistanceMatrix() = default;
  /// Row-major entries; validated against the distance invariants.
  DistanceMatrix(std::size_t n, std::vector<double> entries);

  std::size_t size() const noexcept { return n_; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return d_[i * n_ + j]; }
  std::span<const double> row(std::size_t i) const noexcept { return {d_.data() + i * n_, n_}; }
  std::span<const double> data() const noexcept { return d_; }

  static bool is_finite(double d) noexcept { return d != kInfinity; }

  /// Largest finite distance (0 for a single node or an edgeless graph).
  double max_finite() const noexcept;

 private:
  std::size_t n_ = 0;
  std::vector<double> d_;
};

/// All-pairs Dijkstra on edge lengths 1/W(e). Sources are processed in
/// parallel; the result does not depend on `threads`.
DistanceMatrix distance_matrix(const Network& net, unsigned threads = 0);

/// Sorted node set.
using NodeSet = std::vector<std::size_t>;

/// Open neighbourhood {j : d(i,j) < radius}. A radius <= 0 gives the empty set.
NodeSet neighborhood(const DistanceMatrix& d, std::size_t i, double radius);

/// N(i; s+1) \ N(i; s), i.e. nodes at distance in [s, s+1).
NodeSet boundary_neighborhood(const DistanceMatrix& d, std::size_t i, double s);

/// Neighbourhoods N(i; radius) for every node.
std::vector<NodeSet> all_neighborhoods(const DistanceMatrix& d, double radius);

struct DensenessReport {
  double s = 0.0;
  double k = 1.0;
  double delta = 0.0;           // n^-1 sum_i |N(i;s+1)|^k
  double delta_boundary = 0.0;  // n^-1 sum_i |N^b(i;s)|^k
  double d_max = 0.0;           // max_i |N(i;s+1)|
  double d_max_boundary = 0.0;  // max_i |N^b(i;s)|
  double delta_central = 0.0;   // n^-1 sum_i ||N(i;s+1)| - delta(s;1)|^k
};

DensenessReport denseness(const DistanceMatrix& d, double s, double k);

/// delta(s;1): the average size of the (s+1)-neighbourhoods.
double average_neighborhood_size(const DistanceMatrix& d, double s);

/// Marker for an unconstrained pair radius in quadruple counts.
inline constexpr double kUnboundedRadius = std::numeric_limits<double>::infinity();

/// Histogram of ordered quadruples (i,j,k,l) with j in N(i;m+1), l in N(k;m+1),
/// indexed by floor(d({i,j},{k,l})). Quadruples at infinite distance are
/// not counted. Pass kUnboundedRadius for m to drop the pair constraint.
std::vector<std::uint64_t> quadruple_histogram(const DistanceMatrix& d, double m,
                                               unsigned threads = 0);

/// |H(s,m)|, a single entry of quadruple_histogram.
std::uint64_t quadruple_count(const DistanceMatrix& d, std::size_t s, double m);

struct LocalDenseness {
  double delta_boundary = 0.0;
  double h = 0.0;
};

/// Local boundary density and local quadruple density over N(i;m),
/// maximised over i. Nodes with an empty N(i;m) (only when m == 0)
/// contribute 0.
LocalDenseness local_denseness(const DistanceMatrix& d, std::size_t s, double m);

/// local_denseness for every s in [0, s_max], computed in one pass.
struct LocalDensenessProfile {
  std::vector<double> delta_boundary;
  std::vector<double> h;
};

LocalDensenessProfile local_denseness_profile(const DistanceMatrix& d, double m,
                                              std::size_t s_max, unsigned threads = 0);

/// Omega(i,j) = |N(i;s+1) cap N(j;s+1)| / delta(s;1).
Eigen::MatrixXd overlap_weights(const DistanceMatrix& d, double radius);

}  // namespace netboot
