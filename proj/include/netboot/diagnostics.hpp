#pragma once

// Finite-n values of the network conditions behind the law of large numbers
// and the consistency of both bootstrap schemes. Nothing here thresholds or
// issues verdicts; the numbers are meant to be compared across n.

#include <optional>
#include <string_view>
#include <vector>

#include "netboot/graph.hpp"

namespace netboot {

/// What to do when the user-supplied coefficients stop before the largest
/// finite distance of the graph.
enum class TailPolicy { error, zero, hold_last };

TailPolicy parse_tail_policy(std::string_view name);

/// Weak dependence coefficients gamma_s for s = 0, 1, ..., values.size()-1.
struct GammaProfile {
  std::vector<double> values;
  TailPolicy tail = TailPolicy::error;

  /// gamma_s, applying the tail policy past the last supplied entry.
  double at(std::size_t s) const;
};

/// Builds a profile from (s, gamma_s) pairs. Entries must cover 0..S with no
/// gaps or repeats and be non-negative.
GammaProfile make_gamma_profile(const std::vector<std::pair<std::size_t, double>>& entries,
                                TailPolicy tail);

struct DiagnosticsReport {
  std::size_t n = 0;
  double radius = 0.0;
  double r = 0.0;
  double p = 0.0;

  double lln_condition = 0.0;     // n^-1 sum_{s>=1} delta^b(s;1) gamma_s
  double bb1_a = 0.0;             // Delta(s_n;2)/delta(s_n) + D(s_n)/sqrt(delta(s_n) n)
  double bb1_b = 0.0;             // max_i |sum_{j in B_i} (omega(j) - 1)| / sqrt(n)
  double bb1_c = 0.0;             // sum over s>=1 of the omega-deviation terms
  std::vector<double> bb1_c_by_s; // the per-s terms, index s-1
  double bb2_a = 0.0;             // sum_{s>=1} delta^b(s;1) gamma_s^(1-2/r)
  double bb2_b = 0.0;             // n^-2 sum_{s>=0} |H(s, 2 s_n + 1)| gamma_s^(1-2/r)
  double bb4 = 0.0;               // local-measure expression with exponent 1-2/p
  double dwb2_a = 0.0;            // Delta(s_n;1)/delta(s_n) + D(s_n)/n
  double dwb2_b = 0.0;            // same quantity as bb1_c
  double dwb_third_moment = 0.0;  // n^-3/2 sum_i sum_{j in B_i} sum_{k in B_i u B_j} prod |W|_3
  double omega_max_offdiag = 0.0; // max_{i != j} omega(i,j)
};

struct DiagnosticsOptions {
  /// ||W_l||_3 for every node. When absent, the Gaussian value
  /// sqrt(omega(l)) (E|Z|^3)^(1/3) is used.
  std::optional<double> weight_norm3;
  unsigned threads = 0;
};

/// E|Z|^3 for a standard normal Z, 2 sqrt(2/pi).
inline constexpr double kGaussianAbsThirdMoment = 1.5957691216057308;

DiagnosticsReport diagnostics(const DistanceMatrix& d, double radius, const GammaProfile& gamma,
                              double r, double p, const DiagnosticsOptions& options = {});

}  // namespace netboot
