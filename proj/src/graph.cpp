#include "netboot/graph.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>
#include <sstream>
#include <utility>

#include "netboot/error.hpp"
#include "netboot/parallel.hpp"

namespace netboot {

namespace {

void check_index(const DistanceMatrix& d, std::size_t i) {
  if (i >= d.size()) {
    std::ostringstream msg;
    msg << "node index " << i << " out of range for " << d.size() << " nodes";
    throw Error(ErrorCode::index_out_of_range, msg.str());
  }
}

// floor of a finite distance; callers filter infinite entries first.
inline std::size_t floor_index(double dist) { return static_cast<std::size_t>(std::floor(dist)); }

std::size_t distance_levels(const DistanceMatrix& d) {
  return floor_index(d.max_finite()) + 1;
}

}  // namespace

Network Network::build(std::size_t node_count, std::vector<Edge> edges, WeightMode mode) {
  if (node_count == 0) throw Error(ErrorCode::invalid_argument, "network needs at least one node");

  for (auto& e : edges) {
    if (e.u >= node_count || e.v >= node_count) {
      std::ostringstream msg;
      msg << "edge (" << e.u + 1 << ", " << e.v + 1 << ") references a node outside 1.."
          << node_count;
      throw Error(ErrorCode::index_out_of_range, msg.str());
    }
    if (e.u == e.v) {
      throw Error(ErrorCode::self_loop, "self-loop at node " + std::to_string(e.u + 1));
    }
    if (!(e.weight > 0.0 && e.weight <= 1.0)) {
      std::ostringstream msg;
      msg << "edge weight " << e.weight << " outside (0, 1]";
      throw Error(ErrorCode::invalid_weight, msg.str());
    }
    if (mode == WeightMode::unit && e.weight != 1.0) {
      std::ostringstream msg;
      msg << "edge weight " << e.weight << " must be exactly 1 in unit mode";
      throw Error(ErrorCode::invalid_weight, msg.str());
    }
    if (e.u > e.v) std::swap(e.u, e.v);
  }

  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    return std::tie(a.u, a.v) < std::tie(b.u, b.v);
  });
  for (std::size_t k = 1; k < edges.size(); ++k) {
    if (edges[k].u == edges[k - 1].u && edges[k].v == edges[k - 1].v) {
      std::ostringstream msg;
      msg << "duplicate edge (" << edges[k].u + 1 << ", " << edges[k].v + 1 << ")";
      throw Error(ErrorCode::duplicate_edge, msg.str());
    }
  }
  return Network(node_count, std::move(edges), mode);
}

std::vector<std::size_t> Network::degrees() const {
  std::vector<std::size_t> deg(node_count_, 0);
  for (const auto& e : edges_) {
    ++deg[e.u];
    ++deg[e.v];
  }
  return deg;
}

DistanceMatrix::DistanceMatrix(std::size_t n, std::vector<double> entries)
    : n_(n), d_(std::move(entries)) {
  if (d_.size() != n_ * n_) {
    throw Error(ErrorCode::dimension_mismatch, "distance matrix needs n*n entries");
  }
  for (std::size_t i = 0; i < n_; ++i) {
    if (d_[i * n_ + i] != 0.0) {
      throw Error(ErrorCode::invalid_argument, "distance matrix diagonal must be zero");
    }
    for (std::size_t j = i + 1; j < n_; ++j) {
      const double a = d_[i * n_ + j];
      if (a != d_[j * n_ + i]) {
        throw Error(ErrorCode::not_symmetric, "distance matrix must be symmetric");
      }
      if (!(a >= 1.0)) {
        throw Error(ErrorCode::invalid_argument,
                    "off-diagonal distances must be >= 1 or inf");
      }
    }
  }
}

double DistanceMatrix::max_finite() const noexcept {
  double best = 0.0;
  for (double x : d_) {
    if (is_finite(x)) best = std::max(best, x);
  }
  return best;
}

DistanceMatrix distance_matrix(const Network& net, unsigned threads) {
  const std::size_t n = net.node_count();
  std::vector<std::vector<std::pair<std::size_t, double>>> adj(n);
  for (const auto& e : net.edges()) {
    const double length = 1.0 / e.weight;
    adj[e.u].emplace_back(e.v, length);
    adj[e.v].emplace_back(e.u, length);
  }

  std::vector<double> dist(n * n, DistanceMatrix::kInfinity);
  parallel_for(n, threads, [&](std::size_t src) {
    double* row = dist.data() + src * n;
    using Item = std::pair<double, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    row[src] = 0.0;
    heap.emplace(0.0, src);
    while (!heap.empty()) {
      const auto [du, u] = heap.top();
      heap.pop();
      if (du > row[u]) continue;
      for (const auto& [v, w] : adj[u]) {
        const double cand = du + w;
        if (cand < row[v]) {
          row[v] = cand;
          heap.emplace(cand, v);
        }
      }
    }
  });

  // Floating sums along different paths can differ in the last ulp;
  // keep the matrix exactly symmetric.
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double m = std::min(dist[i * n + j], dist[j * n + i]);
      dist[i * n + j] = m;
      dist[j * n + i] = m;
    }
  }
  return DistanceMatrix(n, std::move(dist));
}

NodeSet neighborhood(const DistanceMatrix& d, std::size_t i, double radius) {
  check_index(d, i);
  NodeSet out;
  const auto row = d.row(i);
  for (std::size_t j = 0; j < row.size(); ++j) {
    if (row[j] < radius) out.push_back(j);
  }
  return out;
}

NodeSet boundary_neighborhood(const DistanceMatrix& d, std::size_t i, double s) {
  check_index(d, i);
  if (s < 0.0) throw Error(ErrorCode::invalid_argument, "boundary radius must be >= 0");
  NodeSet out;
  const auto row = d.row(i);
  for (std::size_t j = 0; j < row.size(); ++j) {
    if (row[j] >= s && row[j] < s + 1.0) out.push_back(j);
  }
  return out;
}

std::vector<NodeSet> all_neighborhoods(const DistanceMatrix& d, double radius) {
  std::vector<NodeSet> out(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) out[i] = neighborhood(d, i, radius);
  return out;
}

double average_neighborhood_size(const DistanceMatrix& d, double s) {
  const std::size_t n = d.size();
  std::size_t total = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (double x : d.row(i)) total += (x < s + 1.0) ? 1 : 0;
  }
  return static_cast<double>(total) / static_cast<double>(n);
}

DensenessReport denseness(const DistanceMatrix& d, double s, double k) {
  if (s < 0.0) throw Error(ErrorCode::invalid_argument, "radius s must be >= 0");
  if (!(k >= 1.0)) throw Error(ErrorCode::invalid_argument, "moment order k must be >= 1");
  const std::size_t n = d.size();

  std::vector<double> sizes(n), boundary(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t inner = 0, outer = 0;
    for (double x : d.row(i)) {
      inner += (x < s) ? 1 : 0;
      outer += (x < s + 1.0) ? 1 : 0;
    }
    sizes[i] = static_cast<double>(outer);
    boundary[i] = static_cast<double>(outer - inner);
  }

  DensenessReport r;
  r.s = s;
  r.k = k;
  const double inv_n = 1.0 / static_cast<double>(n);
  double mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mean += sizes[i];
    r.delta += std::pow(sizes[i], k);
    r.delta_boundary += std::pow(boundary[i], k);
    r.d_max = std::max(r.d_max, sizes[i]);
    r.d_max_boundary = std::max(r.d_max_boundary, boundary[i]);
  }
  mean *= inv_n;
  r.delta *= inv_n;
  r.delta_boundary *= inv_n;
  for (std::size_t i = 0; i < n; ++i) r.delta_central += std::pow(std::abs(sizes[i] - mean), k);
  r.delta_central *= inv_n;
  return r;
}

std::vector<std::uint64_t> quadruple_histogram(const DistanceMatrix& d, double m,
                                               unsigned threads) {
  if (m < 0.0) throw Error(ErrorCode::invalid_argument, "pair radius m must be >= 0");
  const std::size_t n = d.size();
  const std::size_t levels = distance_levels(d);
  const bool unbounded = !DistanceMatrix::is_finite(m);

  // Pair relation P = {(i,j) : j in N(i; m+1)}.
  std::vector<NodeSet> partners(n);
  if (unbounded) {
    NodeSet everyone(n);
    for (std::size_t j = 0; j < n; ++j) everyone[j] = j;
    partners.assign(n, everyone);
  } else {
    partners = all_neighborhoods(d, m + 1.0);
  }

  // When every N(k;m+1) is k's whole reachable set, P is a union of
  // products C x C and the inner count collapses to per-group tallies.
  std::vector<std::size_t> group(n, 0);
  std::size_t group_count = 1;
  bool product = unbounded;
  if (!unbounded) {
    product = true;
    std::vector<std::size_t> label(n, n);
    group_count = 0;
    for (std::size_t i = 0; i < n && product; ++i) {
      std::size_t reach = 0;
      for (double x : d.row(i)) reach += DistanceMatrix::is_finite(x) ? 1 : 0;
      if (partners[i].size() != reach) product = false;
      if (label[i] == n) {
        for (std::size_t j = 0; j < n; ++j) {
          if (DistanceMatrix::is_finite(d(i, j))) label[j] = group_count;
        }
        ++group_count;
      }
    }
    group = std::move(label);
  }

  // Each task handles the pairs with first element i and its own histogram;
  // integer sums make the reduction order irrelevant.
  std::vector<std::vector<std::uint64_t>> partial(n, std::vector<std::uint64_t>(levels, 0));
  const std::size_t inf_level = levels;  // bucket for infinite floor

  parallel_for(n, threads, [&](std::size_t i) {
    auto& hist = partial[i];
    std::vector<std::size_t> f(n);
    std::vector<std::uint64_t> tally((levels + 1) * (product ? group_count : 1), 0);
    const auto row_i = d.row(i);
    for (std::size_t j : partners[i]) {
      const auto row_j = d.row(j);
      for (std::size_t x = 0; x < n; ++x) {
        const double r = std::min(row_i[x], row_j[x]);
        f[x] = DistanceMatrix::is_finite(r) ? floor_index(r) : inf_level;
      }
      if (product) {
        std::fill(tally.begin(), tally.end(), 0);
        for (std::size_t x = 0; x < n; ++x) ++tally[group[x] * (levels + 1) + f[x]];
        for (std::size_t g = 0; g < group_count; ++g) {
          // g_ge(t) = #{x in group : f(x) >= t}; pairs with min = t number
          // g_ge(t)^2 - g_ge(t+1)^2.
          const std::uint64_t* t = tally.data() + g * (levels + 1);
          std::uint64_t above = t[inf_level];
          for (std::size_t s = levels; s-- > 0;) {
            const std::uint64_t ge = above + t[s];
            hist[s] += ge * ge - above * above;
            above = ge;
          }
        }
      } else {
        for (std::size_t k = 0; k < n; ++k) {
          const std::size_t fk = f[k];
          for (std::size_t l : partners[k]) {
            const std::size_t lvl = std::min(fk, f[l]);
            if (lvl != inf_level) ++hist[lvl];
          }
        }
      }
    }
  });

  std::vector<std::uint64_t> hist(levels, 0);
  for (const auto& h : partial) {
    for (std::size_t s = 0; s < levels; ++s) hist[s] += h[s];
  }
  return hist;
}

std::uint64_t quadruple_count(const DistanceMatrix& d, std::size_t s, double m) {
  const auto hist = quadruple_histogram(d, m, 1);
  return s < hist.size() ? hist[s] : 0;
}

LocalDensenessProfile local_denseness_profile(const DistanceMatrix& d, double m,
                                              std::size_t s_max, unsigned threads) {
  if (m < 0.0) throw Error(ErrorCode::invalid_argument, "local radius m must be >= 0");
  const std::size_t n = d.size();
  const std::size_t levels = s_max + 1;
  std::vector<std::vector<double>> per_node_delta(n), per_node_h(n);

  parallel_for(n, threads, [&](std::size_t i) {
    const NodeSet ball = neighborhood(d, i, m);
    auto& out_delta = per_node_delta[i];
    auto& out_h = per_node_h[i];
    out_delta.assign(levels, 0.0);
    out_h.assign(levels, 0.0);
    const std::size_t size = ball.size();
    if (size == 0) return;

    // Local boundary density: x in N^b(j;s) iff floor(d(j,x)) == s.
    std::vector<std::uint64_t> boundary(levels, 0);
    for (std::size_t j : ball) {
      for (std::size_t x : ball) {
        const double dist = d(j, x);
        if (!DistanceMatrix::is_finite(dist)) continue;
        const std::size_t lvl = floor_index(dist);
        if (lvl < levels) ++boundary[lvl];
      }
    }

    // Quadruples inside the ball, pair radius unbounded.
    const std::size_t inf_level = std::numeric_limits<std::size_t>::max();
    std::vector<std::uint64_t> quads(levels, 0);
    std::vector<std::uint64_t> tally(levels + 1, 0);  // last slot: >= levels or inf
    for (std::size_t a : ball) {
      for (std::size_t b : ball) {
        std::fill(tally.begin(), tally.end(), 0);
        for (std::size_t x : ball) {
          const double r = std::min(d(a, x), d(b, x));
          const std::size_t lvl = DistanceMatrix::is_finite(r) ? floor_index(r) : inf_level;
          ++tally[std::min(lvl, levels)];
        }
        std::uint64_t above = tally[levels];
        for (std::size_t s = levels; s-- > 0;) {
          const std::uint64_t ge = above + tally[s];
          quads[s] += ge * ge - above * above;
          above = ge;
        }
      }
    }

    const double sz = static_cast<double>(size);
    for (std::size_t s = 0; s < levels; ++s) {
      out_delta[s] = static_cast<double>(boundary[s]) / sz;
      out_h[s] = static_cast<double>(quads[s]) / (sz * sz * sz);
    }
  });

  LocalDensenessProfile profile;
  profile.delta_boundary.assign(levels, 0.0);
  profile.h.assign(levels, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t s = 0; s < levels; ++s) {
      profile.delta_boundary[s] = std::max(profile.delta_boundary[s], per_node_delta[i][s]);
      profile.h[s] = std::max(profile.h[s], per_node_h[i][s]);
    }
  }
  return profile;
}

LocalDenseness local_denseness(const DistanceMatrix& d, std::size_t s, double m) {
  const auto profile = local_denseness_profile(d, m, s, 1);
  return {profile.delta_boundary[s], profile.h[s]};
}

Eigen::MatrixXd overlap_weights(const DistanceMatrix& d, double radius) {
  if (radius < 0.0) throw Error(ErrorCode::invalid_argument, "block radius must be >= 0");
  const std::size_t n = d.size();
  if (n == 0) throw Error(ErrorCode::invalid_argument, "graph has no nodes");
  const auto blocks = all_neighborhoods(d, radius + 1.0);

  // (i,j) both lie in N(k;s+1) iff k lies in N(i;s+1) cap N(j;s+1).
  Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(n, n);
  std::size_t total = 0;
  for (const auto& block : blocks) {
    total += block.size();
    for (std::size_t i : block) {
      for (std::size_t j : block) omega(i, j) += 1.0;
    }
  }
  const double delta = static_cast<double>(total) / static_cast<double>(n);
  omega /= delta;
  return omega;
}

}  // namespace netboot
