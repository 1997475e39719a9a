#pragma once

#include <functional>
#include <optional>

#include <Eigen/Core>

#include "biot/mesh.hpp"

namespace biot {

/// Material, flow and time-step parameters. Permeability is the scalar K of
/// kappa = K I.
struct PhysicalParams {
  double lambda = 2.0;
  double mu = 1.0;
  double alpha = 1.0;
  double biot_modulus = 1e6;
  double permeability = 1.0;
  double tau = 1.0;
  /// Set when the Lame parameters were derived from (E, nu).
  std::optional<double> young;
  std::optional<double> poisson;

  /// lambda = E nu / ((1 - 2 nu)(1 + nu)), mu = E / (1 + 2 nu).
  static PhysicalParams from_young_poisson(double young, double poisson, double alpha, double biot_modulus,
                                           double permeability, double tau);

  /// sqrt(lambda + 2 mu / d) with d = 2.
  double zeta() const;
  /// alpha^2 / zeta^2 + 1 / M.
  double delta() const;

  void validate() const;
};

using Mat66 = Eigen::Matrix<double, 6, 6>;
using Mat36 = Eigen::Matrix<double, 3, 6>;
using Row6 = Eigen::Matrix<double, 1, 6>;
using Vec6 = Eigen::Matrix<double, 6, 1>;

// Local P1 displacement dofs are ordered (vertex l, component c) -> 2 l + c.
// Local bubble and RT0 dofs follow the local edge numbering.

/// a_T on P1 x P1, exact.
Mat66 local_elasticity_p1(const ElementGeometry& geom, double lambda, double mu);

/// Divergence pairing -(div u, 1)_T of the P1 basis.
Row6 local_div_p1(const ElementGeometry& geom);

struct BubbleBlocks {
  /// a_T(Phi_k, linear_j).
  Mat36 coupling;
  /// (d + 1) a_T(Phi_k, Phi_k), d = 2.
  Eigen::Vector3d diagonal;
  /// -(div Phi_k, 1)_T.
  Eigen::RowVector3d divergence;
  /// a_T(Phi_k, Phi_m), the unperturbed bubble block.
  Eigen::Matrix3d full;
};

/// Edge bubbles Phi_e = lambda_a lambda_b n_e with the global edge normals
/// taken from geom.sign.
BubbleBlocks local_bubble_blocks(const ElementGeometry& geom, double lambda, double mu);

struct Rt0Blocks {
  /// K^{-1} (psi_k, psi_m)_T.
  Eigen::Matrix3d mass;
  /// -(div psi_k, 1)_T.
  Eigen::RowVector3d divergence;
  /// -psi_k . n_{e_m,T} on e_m, where it is constant: the multiplier basis
  /// is 1 / |e| on its edge.
  Eigen::Matrix3d flux;
};

/// RT0 basis psi_k = sign_k |e_k| / (2 |T|) (x - x_k), so that its flux in the
/// direction of the global edge normal is one.
Rt0Blocks local_rt0(const ElementGeometry& geom, double permeability);

using VectorField = std::function<Point(const Point&)>;
using ScalarField = std::function<double(const Point&)>;

struct MomentumLoad {
  Vec6 linear = Vec6::Zero();
  Eigen::Vector3d bubble = Eigen::Vector3d::Zero();
};

/// (f, v)_T for linear and bubble test functions.
MomentumLoad local_body_load(const ElementGeometry& geom, const VectorField& f, int quad_degree);

/// (g, 1)_T.
double local_source_load(const ElementGeometry& geom, const ScalarField& g, int quad_degree);

struct EdgeTractionLoad {
  /// Load on the two edge endpoints (2 components each), ordered as the
  /// endpoints passed in.
  Eigen::Vector4d linear = Eigen::Vector4d::Zero();
  double bubble = 0.0;
};

/// (t, v)_e for the linear hat functions of the endpoints and the edge bubble
/// with global normal `normal`; t is constant along the edge.
EdgeTractionLoad edge_traction_load(double length, const Point& traction, const Point& normal);

/// Map a reference-triangle point to physical coordinates.
Point map_to_element(const ElementGeometry& geom, const Point& ref);

/// Barycentric coordinates of a reference point, ordered like the vertices.
Eigen::Vector3d barycentric(const Point& ref);

}  // namespace biot
