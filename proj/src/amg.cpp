#include "biot/amg.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/SparseCholesky>

namespace biot {

struct AmgHierarchy::Coarse {
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
};

namespace {

Vec diagonal_of(const SparseMat& a) {
  Vec d = Vec::Zero(a.rows());
  for (int i = 0; i < a.outerSize(); ++i)
    for (SparseMat::InnerIterator it(a, i); it; ++it)
      if (it.col() == i) d(i) = it.value();
  return d;
}

// One Gauss-Seidel sweep, forward or backward.
void gauss_seidel(const SparseMat& a, const Vec& b, Vec& x, bool forward) {
  const int n = static_cast<int>(a.rows());
  for (int k = 0; k < n; ++k) {
    const int i = forward ? k : n - 1 - k;
    double s = b(i), diag = 0.0;
    for (SparseMat::InnerIterator it(a, i); it; ++it) {
      if (it.col() == i)
        diag = it.value();
      else
        s -= it.value() * x(it.col());
    }
    x(i) = s / diag;
  }
}

}  // namespace

std::vector<int> aggregate(const SparseMat& a, double strength, int& n_aggregates) {
  const int n = static_cast<int>(a.rows());
  const Vec d = diagonal_of(a);
  for (int i = 0; i < n; ++i)
    if (!(d(i) > 0.0)) throw std::invalid_argument("aggregate: matrix needs a positive diagonal");

  std::vector<std::vector<int>> strong(n);
  for (int i = 0; i < n; ++i)
    for (SparseMat::InnerIterator it(a, i); it; ++it) {
      const int j = static_cast<int>(it.col());
      if (j != i && std::abs(it.value()) >= strength * std::sqrt(d(i) * d(j))) strong[i].push_back(j);
    }

  std::vector<int> agg(n, -1);
  n_aggregates = 0;
  // pass 1: whole free neighbourhoods become aggregates
  for (int i = 0; i < n; ++i) {
    if (agg[i] >= 0) continue;
    bool free = true;
    for (int j : strong[i])
      if (agg[j] >= 0) {
        free = false;
        break;
      }
    if (!free) continue;
    agg[i] = n_aggregates;
    for (int j : strong[i]) agg[j] = n_aggregates;
    ++n_aggregates;
  }
  // pass 2: attach leftovers to the aggregate of their strongest neighbour
  std::vector<int> pass1 = agg;
  for (int i = 0; i < n; ++i) {
    if (agg[i] >= 0) continue;
    double best = -1.0;
    for (SparseMat::InnerIterator it(a, i); it; ++it) {
      const int j = static_cast<int>(it.col());
      if (j == i || pass1[j] < 0) continue;
      const double s = std::abs(it.value()) / std::sqrt(d(i) * d(j));
      if (s >= strength && s > best) {
        best = s;
        agg[i] = pass1[j];
      }
    }
  }
  // pass 3: anything still free (no strong link at all) is a singleton
  for (int i = 0; i < n; ++i)
    if (agg[i] < 0) agg[i] = n_aggregates++;
  return agg;
}

AmgHierarchy::AmgHierarchy(const SparseMat& a, const AmgConfig& cfg) : coarse_(std::make_unique<Coarse>()) {
  if (a.rows() != a.cols() || a.rows() == 0) throw std::invalid_argument("AmgHierarchy: need a square, non-empty matrix");
  levels_.push_back({a, {}, 0, {}});
  while (static_cast<int>(levels_.size()) < cfg.max_levels && levels_.back().A.rows() > cfg.coarsest_size) {
    AmgLevel& fine = levels_.back();
    int nc = 0;
    std::vector<int> agg = aggregate(fine.A, cfg.strength, nc);
    if (nc >= fine.A.rows()) break;  // no coarsening possible
    std::vector<Eigen::Triplet<double>> t;
    for (int i = 0; i < static_cast<int>(agg.size()); ++i) t.emplace_back(i, agg[i], 1.0);
    SparseMat p(fine.A.rows(), nc);
    p.setFromTriplets(t.begin(), t.end());
    SparseMat ac = SparseMat(SparseMat(p.transpose()) * fine.A * p);
    ac.makeCompressed();
    fine.aggregate = std::move(agg);
    fine.n_coarse = nc;
    fine.P = std::move(p);
    levels_.push_back({std::move(ac), {}, 0, {}});
  }
  coarse_->ldlt.compute(Eigen::SparseMatrix<double>(levels_.back().A));
  if (coarse_->ldlt.info() != Eigen::Success) throw std::runtime_error("AmgHierarchy: coarse factorization failed");
}

AmgHierarchy::~AmgHierarchy() = default;
AmgHierarchy::AmgHierarchy(AmgHierarchy&&) noexcept = default;
AmgHierarchy& AmgHierarchy::operator=(AmgHierarchy&&) noexcept = default;

void AmgHierarchy::cycle(int l, const Vec& b, Vec& x) const {
  if (l == num_levels() - 1) {
    x = coarse_->ldlt.solve(b);
    return;
  }
  const AmgLevel& lev = levels_[l];
  x = Vec::Zero(b.size());
  gauss_seidel(lev.A, b, x, true);
  const Vec rc = lev.P.transpose() * (b - lev.A * x);
  Vec xc;
  cycle(l + 1, rc, xc);
  x += lev.P * xc;
  gauss_seidel(lev.A, b, x, false);
}

void AmgHierarchy::vcycle(const Vec& r, Vec& z) const { cycle(0, r, z); }

LinearOperator AmgHierarchy::op() const {
  return [this](const Vec& r, Vec& z) { vcycle(r, z); };
}

}  // namespace biot
