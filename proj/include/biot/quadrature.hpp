#pragma once

#include <vector>

#include "biot/mesh.hpp"

namespace biot {

/// Rule on the reference triangle {(xi, eta) : xi, eta >= 0, xi + eta <= 1}.
/// Weights sum to the reference area 1/2.
struct QuadratureRule {
  int degree = 0;
  std::vector<Point> points;
  std::vector<double> weights;

  int size() const { return static_cast<int>(points.size()); }
};

inline constexpr int kMaxQuadratureDegree = 12;

/// Exact for polynomials of total degree <= degree, 1 <= degree <= 12.
/// Degree 1 is the barycenter rule, degree 2 the three-point interior rule,
/// higher degrees use a collapsed Gauss-Legendre product rule.
const QuadratureRule& quadrature_rule(int degree);

/// Gauss-Legendre nodes and weights on [0, 1].
void gauss_legendre_01(int n, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace biot
