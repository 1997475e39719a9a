#include "biot/local_assembly.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

#include "biot/quadrature.hpp"

namespace biot {

PhysicalParams PhysicalParams::from_young_poisson(double young, double poisson, double alpha, double biot_modulus,
                                                  double permeability, double tau) {
  if (!(poisson >= 0.0 && poisson < 0.5))
    throw std::invalid_argument("PhysicalParams: Poisson ratio must lie in [0, 0.5)");
  PhysicalParams p;
  p.lambda = young * poisson / ((1.0 - 2.0 * poisson) * (1.0 + poisson));
  p.mu = young / (1.0 + 2.0 * poisson);
  p.alpha = alpha;
  p.biot_modulus = biot_modulus;
  p.permeability = permeability;
  p.tau = tau;
  p.young = young;
  p.poisson = poisson;
  return p;
}

double PhysicalParams::zeta() const { return std::sqrt(lambda + 2.0 * mu / 2.0); }

double PhysicalParams::delta() const { return alpha * alpha / (zeta() * zeta()) + 1.0 / biot_modulus; }

void PhysicalParams::validate() const {
  if (!(mu > 0.0)) throw std::invalid_argument("PhysicalParams: mu must be positive");
  if (!(lambda >= 0.0)) throw std::invalid_argument("PhysicalParams: lambda must be non-negative");
  if (!(biot_modulus > 0.0)) throw std::invalid_argument("PhysicalParams: M must be positive");
  if (!(permeability > 0.0)) throw std::invalid_argument("PhysicalParams: K must be positive");
  if (!(tau > 0.0)) throw std::invalid_argument("PhysicalParams: tau must be positive");
  if (!std::isfinite(alpha)) throw std::invalid_argument("PhysicalParams: alpha must be finite");
  if (poisson && !(*poisson >= 0.0 && *poisson < 0.5))
    throw std::invalid_argument("PhysicalParams: Poisson ratio must lie in [0, 0.5)");
}

namespace {

using Mat2 = Eigen::Matrix2d;

// 2 mu eps(A) : eps(B) + lambda tr(A) tr(B) for displacement gradients A, B.
double elastic_form(const Mat2& a, const Mat2& b, double lambda, double mu) {
  const Mat2 ea = 0.5 * (a + a.transpose());
  const Mat2 eb = 0.5 * (b + b.transpose());
  return 2.0 * mu * (ea.array() * eb.array()).sum() + lambda * a.trace() * b.trace();
}

// Gradient of the P1 basis function lambda_l e_c.
Mat2 p1_gradient(const ElementGeometry& geom, int j) {
  Mat2 g = Mat2::Zero();
  g.row(j % 2) = geom.grad_lambda[j / 2].transpose();
  return g;
}

// grad Phi_k = sum_p lambda_p G[k][p].
std::array<std::array<Mat2, 3>, 3> bubble_gradient_coefficients(const ElementGeometry& geom) {
  std::array<std::array<Mat2, 3>, 3> coeff;
  for (int k = 0; k < 3; ++k) {
    const int a = (k + 1) % 3, b = (k + 2) % 3;
    const Point n = geom.edge_normal(k);
    coeff[k][k] = Mat2::Zero();
    coeff[k][a] = n * geom.grad_lambda[b].transpose();
    coeff[k][b] = n * geom.grad_lambda[a].transpose();
  }
  return coeff;
}

// int_T lambda_p lambda_q.
double bary_moment2(double area, int p, int q) { return area * (p == q ? 2.0 : 1.0) / 12.0; }

}  // namespace

Mat66 local_elasticity_p1(const ElementGeometry& geom, double lambda, double mu) {
  Mat66 a;
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j)
      a(i, j) = geom.area * elastic_form(p1_gradient(geom, i), p1_gradient(geom, j), lambda, mu);
  return a;
}

Row6 local_div_p1(const ElementGeometry& geom) {
  Row6 b;
  for (int j = 0; j < 6; ++j) b(j) = -geom.area * geom.grad_lambda[j / 2](j % 2);
  return b;
}

BubbleBlocks local_bubble_blocks(const ElementGeometry& geom, double lambda, double mu) {
  const auto coeff = bubble_gradient_coefficients(geom);
  BubbleBlocks blocks;
  for (int k = 0; k < 3; ++k) {
    Mat2 mean_grad = Mat2::Zero();
    for (int p = 0; p < 3; ++p) mean_grad += coeff[k][p];
    mean_grad *= geom.area / 3.0;
    for (int j = 0; j < 6; ++j) blocks.coupling(k, j) = elastic_form(mean_grad, p1_gradient(geom, j), lambda, mu);
    blocks.divergence(k) = -mean_grad.trace();

    for (int m = 0; m < 3; ++m) {
      double value = 0.0;
      for (int p = 0; p < 3; ++p)
        for (int q = 0; q < 3; ++q)
          value += bary_moment2(geom.area, p, q) * elastic_form(coeff[k][p], coeff[m][q], lambda, mu);
      blocks.full(k, m) = value;
    }
  }
  for (int k = 0; k < 3; ++k) blocks.diagonal(k) = 3.0 * blocks.full(k, k);
  return blocks;
}

Rt0Blocks local_rt0(const ElementGeometry& geom, double permeability) {
  if (!(permeability > 0.0)) throw std::invalid_argument("local_rt0: permeability must be positive");
  Rt0Blocks blocks;
  std::array<double, 3> scale{};
  for (int k = 0; k < 3; ++k) scale[k] = geom.sign[k] * geom.edge_length[k] / (2.0 * geom.area);

  // x - x_k = sum_p lambda_p (x_p - x_k).
  for (int k = 0; k < 3; ++k) {
    for (int m = 0; m < 3; ++m) {
      double value = 0.0;
      for (int p = 0; p < 3; ++p)
        for (int q = 0; q < 3; ++q)
          value += bary_moment2(geom.area, p, q) *
                   (geom.vertices[p] - geom.vertices[k]).dot(geom.vertices[q] - geom.vertices[m]);
      blocks.mass(k, m) = scale[k] * scale[m] * value / permeability;
    }
    blocks.divergence(k) = -geom.sign[k] * geom.edge_length[k];
  }
  blocks.flux = Eigen::Matrix3d::Zero();
  for (int k = 0; k < 3; ++k) blocks.flux(k, k) = -geom.sign[k];
  return blocks;
}

Point map_to_element(const ElementGeometry& geom, const Point& ref) {
  return geom.vertices[0] + ref.x() * (geom.vertices[1] - geom.vertices[0]) +
         ref.y() * (geom.vertices[2] - geom.vertices[0]);
}

Eigen::Vector3d barycentric(const Point& ref) { return {1.0 - ref.x() - ref.y(), ref.x(), ref.y()}; }

MomentumLoad local_body_load(const ElementGeometry& geom, const VectorField& f, int quad_degree) {
  MomentumLoad load;
  const QuadratureRule& rule = quadrature_rule(quad_degree);
  for (int q = 0; q < rule.size(); ++q) {
    const Eigen::Vector3d lam = barycentric(rule.points[q]);
    const Point fx = f(map_to_element(geom, rule.points[q]));
    const double w = rule.weights[q] * 2.0 * geom.area;
    for (int l = 0; l < 3; ++l) {
      load.linear(2 * l) += w * lam(l) * fx.x();
      load.linear(2 * l + 1) += w * lam(l) * fx.y();
    }
    for (int k = 0; k < 3; ++k)
      load.bubble(k) += w * lam((k + 1) % 3) * lam((k + 2) % 3) * fx.dot(geom.edge_normal(k));
  }
  return load;
}

double local_source_load(const ElementGeometry& geom, const ScalarField& g, int quad_degree) {
  const QuadratureRule& rule = quadrature_rule(quad_degree);
  double value = 0.0;
  for (int q = 0; q < rule.size(); ++q) value += rule.weights[q] * g(map_to_element(geom, rule.points[q]));
  return value * 2.0 * geom.area;
}

EdgeTractionLoad edge_traction_load(double length, const Point& traction, const Point& normal) {
  EdgeTractionLoad load;
  // int_e lambda_a = |e| / 2, int_e lambda_a lambda_b = |e| / 6.
  load.linear << traction.x(), traction.y(), traction.x(), traction.y();
  load.linear *= 0.5 * length;
  load.bubble = traction.dot(normal) * length / 6.0;
  return load;
}

}  // namespace biot
