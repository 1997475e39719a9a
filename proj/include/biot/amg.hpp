#pragma once

#include <memory>
#include <vector>

#include "biot/system.hpp"

namespace biot {

struct AmgConfig {
  /// strong connection: |a_ij| >= strength * sqrt(a_ii a_jj)
  double strength = 0.08;
  int max_levels = 25;
  /// stop coarsening once a level has at most this many rows
  int coarsest_size = 64;
};

struct AmgLevel {
  SparseMat A;
  /// aggregate index per fine row; empty on the coarsest level
  std::vector<int> aggregate;
  int n_coarse = 0;
  /// 0/1 indicator prolongation, rows x n_coarse
  SparseMat P;
};

/// Unsmoothed aggregation hierarchy with a V(1,1) cycle, symmetric
/// Gauss-Seidel smoothing and a sparse Cholesky solve on the coarsest level.
class AmgHierarchy {
 public:
  AmgHierarchy(const SparseMat& a, const AmgConfig& cfg = {});
  ~AmgHierarchy();
  AmgHierarchy(AmgHierarchy&&) noexcept;
  AmgHierarchy& operator=(AmgHierarchy&&) noexcept;

  int num_levels() const { return static_cast<int>(levels_.size()); }
  const AmgLevel& level(int l) const { return levels_[l]; }

  /// z = V r, one cycle from a zero initial guess.
  void vcycle(const Vec& r, Vec& z) const;
  LinearOperator op() const;

 private:
  void cycle(int l, const Vec& b, Vec& x) const;

  std::vector<AmgLevel> levels_;
  struct Coarse;
  std::unique_ptr<Coarse> coarse_;
};

/// Greedy neighbourhood aggregation on the strength graph. Returns the
/// aggregate of each row and the aggregate count.
std::vector<int> aggregate(const SparseMat& a, double strength, int& n_aggregates);

}  // namespace biot
