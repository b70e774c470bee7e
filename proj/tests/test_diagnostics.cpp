#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "netboot/diagnostics.hpp"
#include "netboot/error.hpp"
#include "oracles.hpp"

using namespace netboot;

namespace {

// Every field straight from its displayed expression, with triple loops.
DiagnosticsReport naive(const DistanceMatrix& d, double sn, const std::vector<double>& g, double r,
                        double p, double w3_scalar, bool gaussian) {
  const std::size_t n = d.size();
  const double nd = static_cast<double>(n);
  const auto size = [&](std::size_t i, double rad) {
    return static_cast<double>(oracle::ball(d, i, rad).size());
  };
  const auto boundary = [&](std::size_t i, double s) { return size(i, s + 1) - size(i, s); };
  const auto gamma = [&](std::size_t s) { return s < g.size() ? g[s] : 0.0; };
  const std::size_t top = static_cast<std::size_t>(std::floor(d.max_finite()));

  double delta = 0, dmax = 0;
  for (std::size_t i = 0; i < n; ++i) {
    delta += size(i, sn + 1);
    dmax = std::max(dmax, size(i, sn + 1));
  }
  delta /= nd;
  double c1 = 0, c2 = 0;
  for (std::size_t i = 0; i < n; ++i) {
    c1 += std::abs(size(i, sn + 1) - delta);
    c2 += std::pow(size(i, sn + 1) - delta, 2);
  }
  c1 /= nd;
  c2 /= nd;
  const Eigen::MatrixXd om = oracle::omega(d, sn);

  DiagnosticsReport out;
  out.bb1_a = c2 / delta + dmax / std::sqrt(delta * nd);
  out.dwb2_a = c1 / delta + dmax / nd;
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0;
    for (std::size_t j : oracle::ball(d, i, sn + 1)) sum += om(j, j) - 1;
    out.bb1_b = std::max(out.bb1_b, std::abs(sum) / std::sqrt(nd));
  }
  for (std::size_t s = 1; s <= top; ++s) {
    double db = 0, dev = 0;
    for (std::size_t i = 0; i < n; ++i) {
      db += boundary(i, static_cast<double>(s));
      for (std::size_t j = 0; j < n; ++j) {
        if (oracle::finite(d(i, j)) && static_cast<std::size_t>(std::floor(d(i, j))) == s) {
          dev += std::abs(om(i, j) - 1);
        }
      }
    }
    db /= nd;
    out.lln_condition += db * gamma(s) / nd;
    out.bb2_a += db * std::pow(gamma(s), 1 - 2 / r);
    out.bb1_c += dev * gamma(s) / nd;
  }
  out.dwb2_b = out.bb1_c;
  for (std::size_t s = 0; s <= top; ++s) {
    out.bb2_b += static_cast<double>(oracle::quadruples(d, s, 2 * sn + 1)) *
                 std::pow(gamma(s), 1 - 2 / r) / (nd * nd);
    const auto loc = oracle::local(d, s, sn);
    out.bb4 += std::cbrt(delta / nd) * loc.delta_boundary * std::pow(gamma(s), 1 - 2 / p) +
               std::pow(std::pow(delta, 2.5) / nd, 2.0 / 3.0) * loc.h * std::pow(gamma(s), 1 - 2 / p);
  }
  const auto norm3 = [&](std::size_t l) {
    return gaussian ? std::sqrt(om(l, l)) * std::cbrt(kGaussianAbsThirdMoment) : w3_scalar;
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j : oracle::ball(d, i, sn + 1)) {
      std::set<std::size_t> ks;
      for (std::size_t k : oracle::ball(d, i, sn + 1)) ks.insert(k);
      for (std::size_t k : oracle::ball(d, j, sn + 1)) ks.insert(k);
      for (std::size_t k : ks) {
        const std::set<std::size_t> distinct{i, j, k};
        double prod = 1;
        for (std::size_t l : distinct) prod *= norm3(l);
        out.dwb_third_moment += prod;
      }
    }
  out.dwb_third_moment /= std::pow(nd, 1.5);
  return out;
}

GammaProfile geometric(std::size_t len, double rho) {
  GammaProfile g;
  for (std::size_t s = 0; s < len; ++s) g.values.push_back(std::pow(rho, static_cast<double>(s)));
  return g;
}

}  // namespace

TEST_SUITE("diagnostics") {

TEST_CASE("gamma profiles") {
  const GammaProfile g = make_gamma_profile({{1, 0.5}, {0, 1.0}, {2, 0.25}}, TailPolicy::error);
  CHECK(g.values == std::vector<double>{1.0, 0.5, 0.25});
  CHECK_THROWS_AS(g.at(3), Error);
  CHECK(make_gamma_profile({{0, 1.0}, {1, 0.3}}, TailPolicy::zero).at(9) == 0.0);
  CHECK(make_gamma_profile({{0, 1.0}, {1, 0.3}}, TailPolicy::hold_last).at(9) == 0.3);
  CHECK_THROWS_AS(make_gamma_profile({{0, 1.0}, {2, 0.3}}, TailPolicy::zero), Error);
  CHECK_THROWS_AS(make_gamma_profile({{0, 1.0}, {0, 0.3}}, TailPolicy::zero), Error);
  CHECK_THROWS_AS(make_gamma_profile({{0, -1.0}}, TailPolicy::zero), Error);
  CHECK(parse_tail_policy("hold") == TailPolicy::hold_last);
}

TEST_CASE("short gamma without a tail policy is rejected") {
  const auto p5 = distance_matrix(oracle::path(5));
  try {
    diagnostics(p5, 1.0, geometric(3, 0.5), 4, 4);
    FAIL("expected gamma_too_short");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::gamma_too_short);
  }
  CHECK_NOTHROW(diagnostics(p5, 1.0, geometric(5, 0.5), 4, 4));
  CHECK_THROWS_AS(diagnostics(p5, 1.0, geometric(5, 0.5), 2, 4), Error);
}

TEST_CASE("degenerate inputs") {
  const auto empty = distance_matrix(oracle::edgeless(6));
  const auto rep = diagnostics(empty, 1.0, geometric(1, 0.5), 4, 4);
  CHECK(rep.lln_condition == 0.0);
  CHECK(rep.bb2_a == 0.0);

  const auto c8 = distance_matrix(oracle::cycle(8));
  GammaProfile zeros{std::vector<double>(5, 0.0), TailPolicy::error};
  const auto z = diagnostics(c8, 1.0, zeros, 4, 4);
  CHECK(z.lln_condition == 0.0);
  CHECK(z.bb1_c == 0.0);
  CHECK(z.bb2_a == 0.0);
  CHECK(z.bb2_b == 0.0);
  CHECK(z.bb4 == 0.0);
  CHECK(z.dwb2_b == 0.0);
}

TEST_CASE("star network is flagged") {
  const auto star = distance_matrix(oracle::star(1000));
  const DensenessReport r1 = denseness(star, 1.0, 1.0);
  const DensenessReport r2 = denseness(star, 1.0, 2.0);
  CHECK(r1.delta == doctest::Approx(2.998).epsilon(1e-14));
  CHECK(r2.delta_central >= r1.delta_central * r1.delta_central);
  CHECK(r1.delta_central * r1.delta_central > 3.9);
  GammaProfile g{{1.0, 0.5, 0.25}, TailPolicy::error};
  const auto rep = diagnostics(star, 1.0, g, 4, 4, {std::nullopt, 1});
  CHECK(rep.bb1_a >= r2.delta_central / r1.delta);
  CHECK(rep.bb1_a > 1.0);
}

TEST_CASE("diagnostics match a naive recomputation") {
  std::mt19937_64 rng(77);
  for (int rep = 0; rep < 6; ++rep) {
    const auto d = distance_matrix(oracle::random_graph(14 + rep * 3, 0.12, rng, rep % 2 == 1));
    const GammaProfile g = geometric(40, 0.6);
    for (double sn : {1.0, 2.0}) {
      const bool gaussian = rep % 3 != 0;
      DiagnosticsOptions opts;
      if (!gaussian) opts.weight_norm3 = 1.3;
      opts.threads = 2;
      const auto got = diagnostics(d, sn, g, 3.0, 5.0, opts);
      const auto want = naive(d, sn, g.values, 3.0, 5.0, 1.3, gaussian);
      const auto close = [](double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(b)); };
      CHECK(close(got.lln_condition, want.lln_condition));
      CHECK(close(got.bb1_a, want.bb1_a));
      CHECK(close(got.bb1_b, want.bb1_b));
      CHECK(close(got.bb1_c, want.bb1_c));
      CHECK(close(got.bb2_a, want.bb2_a));
      CHECK(close(got.bb2_b, want.bb2_b));
      CHECK(close(got.bb4, want.bb4));
      CHECK(close(got.dwb2_a, want.dwb2_a));
      CHECK(close(got.dwb2_b, want.dwb2_b));
      CHECK(close(got.dwb_third_moment, want.dwb_third_moment));
      double by_s = 0.0;
      for (double t : got.bb1_c_by_s) by_s += t;
      CHECK(close(by_s, got.bb1_c));
    }
  }
}

}  // TEST_SUITE
