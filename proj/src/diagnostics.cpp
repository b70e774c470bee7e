#include "netboot/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <sstream>
#include <string>

#include "netboot/error.hpp"

namespace netboot {

TailPolicy parse_tail_policy(std::string_view name) {
  if (name == "error") return TailPolicy::error;
  if (name == "zero") return TailPolicy::zero;
  if (name == "hold") return TailPolicy::hold_last;
  throw Error(ErrorCode::invalid_argument, "unknown tail policy '" + std::string(name) + "'");
}

double GammaProfile::at(std::size_t s) const {
  if (s < values.size()) return values[s];
  switch (tail) {
    case TailPolicy::zero: return 0.0;
    case TailPolicy::hold_last: return values.empty() ? 0.0 : values.back();
    case TailPolicy::error: break;
  }
  throw Error(ErrorCode::gamma_too_short,
              "gamma_" + std::to_string(s) + " was not supplied and the tail policy is 'error'");
}

GammaProfile make_gamma_profile(const std::vector<std::pair<std::size_t, double>>& entries,
                                TailPolicy tail) {
  auto sorted = entries;
  std::sort(sorted.begin(), sorted.end());
  GammaProfile out;
  out.tail = tail;
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    if (sorted[k].first != k) {
      throw Error(ErrorCode::invalid_argument,
                  "gamma entries must cover s = 0, 1, 2, ... without gaps or repeats");
    }
    if (!(sorted[k].second >= 0.0) || !std::isfinite(sorted[k].second)) {
      throw Error(ErrorCode::invalid_argument, "gamma values must be finite and >= 0");
    }
    out.values.push_back(sorted[k].second);
  }
  if (out.values.empty()) throw Error(ErrorCode::invalid_argument, "gamma profile is empty");
  return out;
}

DiagnosticsReport diagnostics(const DistanceMatrix& d, double radius, const GammaProfile& gamma,
                              double r, double p, const DiagnosticsOptions& options) {
  if (!(radius > 0.0)) throw Error(ErrorCode::invalid_argument, "radius must be > 0");
  if (!(r > 2.0) || !(p > 2.0)) throw Error(ErrorCode::invalid_argument, "r and p must exceed 2");
  const std::size_t n = d.size();
  const double nd = static_cast<double>(n);
  const auto s_max = static_cast<std::size_t>(std::floor(d.max_finite()));

  std::vector<double> g(s_max + 1);
  for (std::size_t s = 0; s <= s_max; ++s) g[s] = gamma.at(s);
  const double exp_r = 1.0 - 2.0 / r;
  const double exp_p = 1.0 - 2.0 / p;

  DiagnosticsReport rep;
  rep.n = n;
  rep.radius = radius;
  rep.r = r;
  rep.p = p;

  const DensenessReport first = denseness(d, radius, 1.0);
  const DensenessReport second = denseness(d, radius, 2.0);
  const double delta = first.delta;
  rep.bb1_a = second.delta_central / delta + first.d_max / std::sqrt(delta * nd);
  rep.dwb2_a = first.delta_central / delta + first.d_max / nd;

  const Eigen::MatrixXd omega = overlap_weights(d, radius);
  const auto blocks = all_neighborhoods(d, radius + 1.0);

  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    for (std::size_t j : blocks[i]) {
      sum += omega(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j)) - 1.0;
    }
    rep.bb1_b = std::max(rep.bb1_b, std::abs(sum));
  }
  rep.bb1_b /= std::sqrt(nd);

  // One pass over pairs, bucketed by floor(d(i,j)) = s (j in N^b(i;s)).
  std::vector<double> boundary_pairs(s_max + 1, 0.0), omega_dev(s_max + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double dist = d(i, j);
      if (!DistanceMatrix::is_finite(dist)) continue;
      const auto s = static_cast<std::size_t>(std::floor(dist));
      boundary_pairs[s] += 1.0;
      const double w = omega(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      omega_dev[s] += std::abs(w - 1.0);
      if (i != j) rep.omega_max_offdiag = std::max(rep.omega_max_offdiag, w);
    }
  }

  for (std::size_t s = 1; s <= s_max; ++s) {
    const double boundary_density = boundary_pairs[s] / nd;  // delta^b(s;1)
    rep.lln_condition += boundary_density * g[s];
    rep.bb2_a += boundary_density * std::pow(g[s], exp_r);
    const double term = omega_dev[s] * g[s] / nd;
    rep.bb1_c_by_s.push_back(term);
    rep.bb1_c += term;
  }
  rep.lln_condition /= nd;
  rep.dwb2_b = rep.bb1_c;

  const auto quads = quadruple_histogram(d, 2.0 * radius + 1.0, options.threads);
  for (std::size_t s = 0; s < quads.size() && s <= s_max; ++s) {
    rep.bb2_b += static_cast<double>(quads[s]) * std::pow(g[s], exp_r);
  }
  rep.bb2_b /= nd * nd;

  const auto local = local_denseness_profile(d, radius, s_max, options.threads);
  double local_boundary = 0.0, local_quads = 0.0;
  for (std::size_t s = 0; s <= s_max; ++s) {
    const double weight = std::pow(g[s], exp_p);
    local_boundary += local.delta_boundary[s] * weight;
    local_quads += local.h[s] * weight;
  }
  rep.bb4 = std::cbrt(delta / nd) * local_boundary +
            std::pow(std::pow(delta, 2.5) / nd, 2.0 / 3.0) * local_quads;

  std::vector<double> norm3(n);
  const double gaussian_factor = std::cbrt(kGaussianAbsThirdMoment);
  for (std::size_t l = 0; l < n; ++l) {
    norm3[l] = options.weight_norm3.value_or(
        std::sqrt(omega(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(l))) *
        gaussian_factor);
  }
  // Product over the set {i, j, k}: repeated indices count once.
  double third = 0.0;
  NodeSet merged;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j : blocks[i]) {
      merged.clear();
      std::set_union(blocks[i].begin(), blocks[i].end(), blocks[j].begin(), blocks[j].end(),
                     std::back_inserter(merged));
      const double base = (i == j) ? norm3[i] : norm3[i] * norm3[j];
      for (std::size_t k : merged) third += (k == i || k == j) ? base : base * norm3[k];
    }
  }
  rep.dwb_third_moment = third / std::pow(nd, 1.5);
  return rep;
}

}  // namespace netboot
