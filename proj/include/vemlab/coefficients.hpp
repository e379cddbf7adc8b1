#pragma once

#include "vemlab/mesh.hpp"

#include <Eigen/Dense>

#include <functional>

namespace vemlab {

using TensorField = std::function<Eigen::Matrix2d(const Point&)>;
using VectorField = std::function<Point(const Point&)>;

/// Data of  div(-kappa grad p + b p) + gamma p = f.
///
/// Empty `b`, `gamma` or `f` stand for the zero function and skip the
/// corresponding integrals. `kappa` must be symmetric with eigenvalues
/// bounded below by `kappa0`.
struct Coefficients {
  TensorField kappa;
  VectorField b;
  std::function<double(const Point&)> gamma;
  std::function<double(const Point&)> f;
  double kappa0 = 1.0;

  static Coefficients scalar(double kappa, std::function<double(const Point&)> source = {}) {
    Coefficients c;
    c.kappa = [kappa](const Point&) -> Eigen::Matrix2d { return kappa * Eigen::Matrix2d::Identity(); };
    c.f = std::move(source);
    c.kappa0 = kappa;
    return c;
  }
};

}  // namespace vemlab
