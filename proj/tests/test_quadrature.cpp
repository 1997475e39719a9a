#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "biot/quadrature.hpp"

using namespace biot;

namespace {

// int over the reference triangle of x^a y^b = a! b! / (a + b + 2)!
double monomial_exact(int a, int b) {
  return std::tgamma(a + 1.0) * std::tgamma(b + 1.0) / std::tgamma(a + b + 3.0);
}

}  // namespace

TEST(Quadrature, ExactForMonomialsUpToDegree) {
  for (int d = 1; d <= kMaxQuadratureDegree; ++d) {
    const QuadratureRule& r = quadrature_rule(d);
    EXPECT_EQ(r.degree, d);
    for (int a = 0; a <= d; ++a)
      for (int b = 0; a + b <= d; ++b) {
        double s = 0.0;
        for (int q = 0; q < r.size(); ++q) s += r.weights[q] * std::pow(r.points[q].x(), a) * std::pow(r.points[q].y(), b);
        EXPECT_NEAR(s, monomial_exact(a, b), 1e-15) << "degree " << d << " x^" << a << " y^" << b;
      }
  }
}

TEST(Quadrature, PointsInsideAndWeightsPositive) {
  for (int d = 1; d <= kMaxQuadratureDegree; ++d) {
    const QuadratureRule& r = quadrature_rule(d);
    EXPECT_NEAR(std::accumulate(r.weights.begin(), r.weights.end(), 0.0), 0.5, 1e-15);
    for (int q = 0; q < r.size(); ++q) {
      EXPECT_GT(r.weights[q], 0.0);
      EXPECT_GE(r.points[q].x(), 0.0);
      EXPECT_GE(r.points[q].y(), 0.0);
      EXPECT_LE(r.points[q].x() + r.points[q].y(), 1.0 + 1e-15);
    }
  }
}

TEST(Quadrature, OutOfRangeDegree) {
  EXPECT_THROW(quadrature_rule(0), std::invalid_argument);
  EXPECT_THROW(quadrature_rule(kMaxQuadratureDegree + 1), std::invalid_argument);
}

TEST(Quadrature, GaussLegendreOnUnitInterval) {
  std::vector<double> x, w;
  for (int n = 1; n <= 8; ++n) {
    gauss_legendre_01(n, x, w);
    ASSERT_EQ(static_cast<int>(x.size()), n);
    for (int p = 0; p <= 2 * n - 1; ++p) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += w[i] * std::pow(x[i], p);
      EXPECT_NEAR(s, 1.0 / (p + 1), 1e-14) << "n=" << n << " p=" << p;
    }
  }
}
