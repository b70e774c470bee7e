#include "netboot/smooth.hpp"

#include <cmath>
#include <sstream>

#include "netboot/error.hpp"

namespace netboot {

namespace {

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> parts;
  std::string current;
  for (char c : text) {
    if (c == sep) {
      parts.push_back(current);
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  parts.push_back(current);
  return parts;
}

double to_double(const std::string& token) {
  try {
    std::size_t used = 0;
    const double x = std::stod(token, &used);
    if (used == token.size()) return x;
  } catch (const std::logic_error&) {
  }
  throw Error(ErrorCode::invalid_argument, "bad polynomial coefficient '" + token + "'");
}

int to_exponent(const std::string& token) {
  try {
    std::size_t used = 0;
    const int e = std::stoi(token, &used);
    if (used == token.size() && e >= 0) return e;
  } catch (const std::logic_error&) {
  }
  throw Error(ErrorCode::invalid_argument, "bad polynomial exponent '" + token + "'");
}

double ipow(double x, int e) {
  double r = 1.0;
  for (int k = 0; k < e; ++k) r *= x;
  return r;
}

}  // namespace

SmoothFunction identity_function() {
  return {"identity",
          [](const Eigen::VectorXd& x) {
            if (x.size() != 1) {
              throw Error(ErrorCode::dimension_mismatch, "identity phi needs v = 1");
            }
            return x[0];
          },
          [](const Eigen::VectorXd& x) { return Eigen::VectorXd::Ones(x.size()).eval(); }};
}

SmoothFunction l2_norm_function() {
  return {"l2norm", [](const Eigen::VectorXd& x) { return x.norm(); },
          [](const Eigen::VectorXd& x) {
            const double r = x.norm();
            // Not differentiable at 0; report the zero subgradient.
            if (r == 0.0) return Eigen::VectorXd::Zero(x.size()).eval();
            return (x / r).eval();
          }};
}

SmoothFunction polynomial_function(std::vector<PolynomialTerm> terms) {
  if (terms.empty()) throw Error(ErrorCode::invalid_argument, "polynomial needs at least one term");
  const std::size_t dim = terms.front().exponents.size();
  for (const auto& t : terms) {
    if (t.exponents.size() != dim) {
      throw Error(ErrorCode::invalid_argument, "polynomial terms disagree on dimension");
    }
  }
  auto check = [dim](const Eigen::VectorXd& x) {
    if (static_cast<std::size_t>(x.size()) != dim) {
      throw Error(ErrorCode::dimension_mismatch, "polynomial dimension does not match data");
    }
  };
  auto value = [terms, check](const Eigen::VectorXd& x) {
    check(x);
    double total = 0.0;
    for (const auto& t : terms) {
      double prod = t.coefficient;
      for (std::size_t c = 0; c < t.exponents.size(); ++c) {
        prod *= ipow(x[static_cast<Eigen::Index>(c)], t.exponents[c]);
      }
      total += prod;
    }
    return total;
  };
  auto gradient = [terms, check](const Eigen::VectorXd& x) {
    check(x);
    Eigen::VectorXd g = Eigen::VectorXd::Zero(x.size());
    for (const auto& t : terms) {
      for (std::size_t c = 0; c < t.exponents.size(); ++c) {
        if (t.exponents[c] == 0) continue;
        double prod = t.coefficient * t.exponents[c];
        for (std::size_t o = 0; o < t.exponents.size(); ++o) {
          const int e = (o == c) ? t.exponents[o] - 1 : t.exponents[o];
          prod *= ipow(x[static_cast<Eigen::Index>(o)], e);
        }
        g[static_cast<Eigen::Index>(c)] += prod;
      }
    }
    return g;
  };
  return {"poly", value, gradient};
}

SmoothFunction parse_smooth_function(std::string_view spec, std::size_t dim) {
  if (spec == "identity") {
    if (dim != 1) throw Error(ErrorCode::invalid_argument, "phi=identity requires v = 1");
    return identity_function();
  }
  if (spec == "l2norm") return l2_norm_function();
  constexpr std::string_view prefix = "poly:";
  if (spec.substr(0, prefix.size()) == prefix) {
    std::vector<PolynomialTerm> terms;
    for (const auto& term : split(spec.substr(prefix.size()), ';')) {
      const auto at = term.find('@');
      if (at == std::string::npos) {
        throw Error(ErrorCode::invalid_argument, "polynomial term '" + term + "' lacks '@'");
      }
      PolynomialTerm t;
      t.coefficient = to_double(term.substr(0, at));
      for (const auto& e : split(std::string_view(term).substr(at + 1), ',')) {
        t.exponents.push_back(to_exponent(e));
      }
      if (t.exponents.size() != dim) {
        std::ostringstream msg;
        msg << "polynomial term '" << term << "' has " << t.exponents.size()
            << " exponents, data has v = " << dim;
        throw Error(ErrorCode::invalid_argument, msg.str());
      }
      terms.push_back(std::move(t));
    }
    auto f = polynomial_function(std::move(terms));
    f.name = std::string(spec);
    return f;
  }
  throw Error(ErrorCode::invalid_argument, "unknown phi '" + std::string(spec) + "'");
}

}  // namespace netboot
