#include "biot/quadrature.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

namespace biot {

namespace {

// (P_n(x), P_n'(x)) by the three-term recurrence.
std::pair<double, double> legendre(int n, double x) {
  double p0 = 1.0, p1 = x;
  for (int k = 2; k <= n; ++k) {
    const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = pk;
  }
  return {p1, n * (x * p1 - p0) / (x * x - 1.0)};
}

}  // namespace

void gauss_legendre_01(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      const auto [p, dp] = legendre(n, x);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double dp = legendre(n, x).second;
    nodes[i] = 0.5 * (1.0 - x);
    weights[i] = 1.0 / ((1.0 - x * x) * dp * dp);
  }
}

namespace {

QuadratureRule make_rule(int degree) {
  QuadratureRule rule;
  rule.degree = degree;
  if (degree == 1) {
    rule.points = {Point(1.0 / 3.0, 1.0 / 3.0)};
    rule.weights = {0.5};
    return rule;
  }
  if (degree == 2) {
    rule.points = {Point(1.0 / 6.0, 1.0 / 6.0), Point(2.0 / 3.0, 1.0 / 6.0), Point(1.0 / 6.0, 2.0 / 3.0)};
    rule.weights = {1.0 / 6.0, 1.0 / 6.0, 1.0 / 6.0};
    return rule;
  }
  // xi = u, eta = v (1 - u); the Jacobian (1 - u) raises the degree in u by one.
  const int n = (degree + 2 + 1) / 2;
  std::vector<double> x, w;
  gauss_legendre_01(n, x, w);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      rule.points.emplace_back(x[i], x[j] * (1.0 - x[i]));
      rule.weights.push_back(w[i] * w[j] * (1.0 - x[i]));
    }
  }
  return rule;
}

std::array<QuadratureRule, kMaxQuadratureDegree + 1> build_all() {
  std::array<QuadratureRule, kMaxQuadratureDegree + 1> rules;
  for (int d = 1; d <= kMaxQuadratureDegree; ++d) rules[d] = make_rule(d);
  return rules;
}

}  // namespace

const QuadratureRule& quadrature_rule(int degree) {
  if (degree < 1 || degree > kMaxQuadratureDegree)
    throw std::invalid_argument("quadrature_rule: unsupported degree " + std::to_string(degree));
  static const auto rules = build_all();
  return rules[degree];
}

}  // namespace biot
