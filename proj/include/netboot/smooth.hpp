#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace netboot {

/// Scalar function of the mean, phi: R^v -> R, with its gradient.
struct SmoothFunction {
  std::string name;
  std::function<double(const Eigen::VectorXd&)> value;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> gradient;
};

SmoothFunction identity_function();
SmoothFunction l2_norm_function();

struct PolynomialTerm {
  double coefficient = 0.0;
  std::vector<int> exponents;  // one per coordinate
};

SmoothFunction polynomial_function(std::vector<PolynomialTerm> terms);

/// Parses `identity`, `l2norm`, or `poly:<c>@<e1>,...,<ev>;<c>@...` (for
/// example `poly:1@2,0;-1@0,1` is x1^2 - x2). `dim` is the data dimension.
SmoothFunction parse_smooth_function(std::string_view spec, std::size_t dim);

}  // namespace netboot
