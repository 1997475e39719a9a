#include "biot/system.hpp"

#include <iomanip>
#include <ostream>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <Eigen/SparseLU>

#include "biot/precond.hpp"

namespace biot {

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

SparseMat from_triplets(int rows, int cols, const Triplets& t) {
  SparseMat m(rows, cols);
  m.setFromTriplets(t.begin(), t.end());
  m.makeCompressed();
  return m;
}

SparseMat diagonal_matrix(const Vec& d) {
  Triplets t;
  for (Eigen::Index i = 0; i < d.size(); ++i) t.emplace_back(i, i, d(i));
  return from_triplets(static_cast<int>(d.size()), static_cast<int>(d.size()), t);
}

// Copy `block` scaled by `s` into triplets at (r0, c0).
void put_block(Triplets& t, const SparseMat& block, int r0, int c0, double s = 1.0) {
  for (int i = 0; i < block.outerSize(); ++i)
    for (SparseMat::InnerIterator it(block, i); it; ++it) t.emplace_back(r0 + it.row(), c0 + it.col(), s * it.value());
}

void check_size(const Vec& v, int n, const char* what) {
  if (v.size() != n) throw std::invalid_argument(std::string("size mismatch in ") + what);
}

}  // namespace

std::string_view to_string(Scheme s) {
  switch (s) {
    case Scheme::stabilized: return "stabilized";
    case Scheme::unstabilized: return "unstabilized";
    case Scheme::enriched: return "enriched";
  }
  return "?";
}

Scheme parse_scheme(std::string_view s) {
  if (s == "stabilized") return Scheme::stabilized;
  if (s == "unstabilized") return Scheme::unstabilized;
  if (s == "enriched") return Scheme::enriched;
  throw std::invalid_argument("unknown scheme '" + std::string(s) + "'");
}

std::string_view to_string(PrecondKind k) {
  switch (k) {
    case PrecondKind::diag: return "diag";
    case PrecondKind::lower: return "lower";
    case PrecondKind::upper: return "upper";
  }
  return "?";
}

PrecondKind parse_precond_kind(std::string_view s) {
  if (s == "diag" || s == "D") return PrecondKind::diag;
  if (s == "lower" || s == "L") return PrecondKind::lower;
  if (s == "upper" || s == "U") return PrecondKind::upper;
  throw std::invalid_argument("unknown preconditioner '" + std::string(s) + "'");
}

State State::zero(const DofMap& dm) {
  State s;
  s.u_lin = Vec::Zero(dm.n_ulin);
  s.u_bub = Vec::Zero(dm.n_bub);
  s.p = Vec::Zero(dm.n_p);
  s.beta = Vec::Zero(dm.n_beta);
  s.w = Vec::Zero(dm.n_w);
  return s;
}

BlockSystem assemble_full(const Mesh& mesh, const DofMap& dm, const PhysicalParams& params, const BoundarySpec& bc,
                          const Loads& loads, const State& prev, Scheme scheme) {
  params.validate();
  if (scheme == Scheme::unstabilized && dm.n_bub != 0)
    throw std::invalid_argument("assemble_full: unstabilized scheme needs a DofMap without bubbles");
  if (scheme != Scheme::unstabilized && dm.n_bub == 0 && mesh.num_interior_edges() > 0)
    throw std::invalid_argument("assemble_full: bubble scheme needs a DofMap with bubbles");
  if (dm.n_p != mesh.num_triangles()) throw std::invalid_argument("assemble_full: DofMap does not match mesh");
  check_size(prev.u_lin, dm.n_ulin, "prev.u_lin");
  check_size(prev.u_bub, dm.n_bub, "prev.u_bub");
  check_size(prev.p, dm.n_p, "prev.p");

  BlockSystem sys;
  sys.scheme = scheme;
  sys.params = params;
  sys.dm = dm;
  sys.D_bb = Vec::Zero(dm.n_bub);
  sys.M_p = Vec::Zero(dm.n_p);
  sys.b_b = Vec::Zero(dm.n_bub);
  sys.b_l = Vec::Zero(dm.n_ulin);
  sys.b_p = Vec::Zero(dm.n_p);
  sys.b_beta = Vec::Zero(dm.n_beta);
  sys.b_w = Vec::Zero(dm.n_w);
  sys.w_blocks.resize(mesh.num_triangles());

  Triplets t_bfull, t_bl, t_ll, t_bb, t_l, t_w, t_beta, t_mw;
  const double tau = params.tau;

  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const ElementGeometry geom = element_geometry(mesh, t);
    const auto& tri = mesh.triangles[t];
    const auto& te = mesh.tri_edges[t];

    std::array<int, 6> lin{};
    for (int j = 0; j < 6; ++j) lin[j] = dm.linear[2 * tri[j / 2] + j % 2];
    std::array<int, 3> bub{}, vel{}, mult{};
    for (int k = 0; k < 3; ++k) {
      bub[k] = dm.bubble[te[k]];
      vel[k] = dm.velocity[3 * t + k];
      mult[k] = dm.multiplier[te[k]];
    }

    const Mat66 a_ll = local_elasticity_p1(geom, params.lambda, params.mu);
    const Row6 b_l = local_div_p1(geom);
    for (int i = 0; i < 6; ++i) {
      if (lin[i] < 0) continue;
      for (int j = 0; j < 6; ++j)
        if (lin[j] >= 0) t_ll.emplace_back(lin[i], lin[j], a_ll(i, j));
      t_l.emplace_back(t, lin[i], b_l(i));
    }

    if (dm.n_bub > 0) {
      const BubbleBlocks bb = local_bubble_blocks(geom, params.lambda, params.mu);
      for (int k = 0; k < 3; ++k) {
        if (bub[k] < 0) continue;
        sys.D_bb(bub[k]) += bb.diagonal(k);
        t_bb.emplace_back(t, bub[k], bb.divergence(k));
        for (int j = 0; j < 6; ++j)
          if (lin[j] >= 0) t_bl.emplace_back(bub[k], lin[j], bb.coupling(k, j));
        if (scheme == Scheme::enriched)
          for (int m = 0; m < 3; ++m)
            if (bub[m] >= 0) t_bfull.emplace_back(bub[k], bub[m], bb.full(k, m));
      }
    }

    sys.M_p(t) = geom.area;

    const Rt0Blocks rt = local_rt0(geom, params.permeability);
    for (int k = 0; k < 3; ++k) {
      if (vel[k] < 0) continue;
      sys.w_blocks[t].push_back(vel[k]);
      t_w.emplace_back(t, vel[k], rt.divergence(k));
      for (int m = 0; m < 3; ++m) {
        if (vel[m] >= 0) t_mw.emplace_back(vel[k], vel[m], rt.mass(k, m));
        // the flux of psi_k through edge m, paired with the multiplier there
        if (mult[m] >= 0 && rt.flux(k, m) != 0.0) t_beta.emplace_back(mult[m], vel[k], rt.flux(k, m));
      }
    }

    if (loads.f) {
      const MomentumLoad ml = local_body_load(geom, loads.f, loads.quad_degree);
      for (int j = 0; j < 6; ++j)
        if (lin[j] >= 0) sys.b_l(lin[j]) += ml.linear(j);
      for (int k = 0; k < 3; ++k)
        if (bub[k] >= 0) sys.b_b(bub[k]) += ml.bubble(k);
    }
    if (loads.g) sys.b_p(t) += tau * local_source_load(geom, loads.g, loads.quad_degree);
    sys.b_p(t) += geom.area * prev.p(t) / params.biot_modulus;
  }

  // traction on Gamma_t
  for (int e = 0; e < mesh.num_edges(); ++e) {
    const BoundaryTag tag = mesh.boundary_tag[e];
    if (tag == BoundaryTag::interior) continue;
    const auto it = bc.traction.find(tag);
    if (it == bc.traction.end() || it->second.isZero(0.0)) continue;
    const auto& ed = mesh.edges[e];
    const double len = (mesh.vertices[ed[1]] - mesh.vertices[ed[0]]).norm();
    const EdgeTractionLoad tl = edge_traction_load(len, it->second, mesh.edge_normal[e]);
    for (int a = 0; a < 2; ++a)
      for (int c = 0; c < 2; ++c) {
        const int g = dm.linear[2 * ed[a] + c];
        if (g >= 0) sys.b_l(g) += tl.linear(2 * a + c);
      }
    if (dm.bubble[e] >= 0) sys.b_b(dm.bubble[e]) += tl.bubble;
  }

  sys.bubble_full = from_triplets(dm.n_bub, dm.n_bub, t_bfull);
  sys.A_bl = from_triplets(dm.n_bub, dm.n_ulin, t_bl);
  sys.A_ll = from_triplets(dm.n_ulin, dm.n_ulin, t_ll);
  sys.B_b = from_triplets(dm.n_p, dm.n_bub, t_bb);
  sys.B_l = from_triplets(dm.n_p, dm.n_ulin, t_l);
  sys.B_w = from_triplets(dm.n_p, dm.n_w, t_w);
  sys.B_beta = from_triplets(dm.n_beta, dm.n_w, t_beta);
  sys.M_w = from_triplets(dm.n_w, dm.n_w, t_mw);

  // alpha (div u^{n-1}, q) = -alpha (B_b u_b + B_l u_l)
  sys.b_p -= params.alpha * (sys.B_b * prev.u_bub + sys.B_l * prev.u_lin);
  return sys;
}

SparseMat BlockSystem::full_matrix() const {
  const double a = params.alpha, tau = params.tau;
  const int ob = dm.offset_bubble(), ol = dm.offset_linear(), op = dm.offset_pressure(),
            om = dm.offset_multiplier(), ow = dm.offset_velocity();
  Triplets t;
  if (scheme == Scheme::enriched)
    put_block(t, bubble_full, ob, ob);
  else
    for (int i = 0; i < dm.n_bub; ++i) t.emplace_back(ob + i, ob + i, D_bb(i));
  const SparseMat A_lb = A_bl.transpose();
  const SparseMat B_bT = B_b.transpose(), B_lT = B_l.transpose(), B_wT = B_w.transpose(), B_betaT = B_beta.transpose();
  put_block(t, A_bl, ob, ol);
  put_block(t, B_bT, ob, op, a);
  put_block(t, A_lb, ol, ob);
  put_block(t, A_ll, ol, ol);
  put_block(t, B_lT, ol, op, a);
  put_block(t, B_b, op, ob, -a);
  put_block(t, B_l, op, ol, -a);
  for (int i = 0; i < dm.n_p; ++i) t.emplace_back(op + i, op + i, M_p(i) / params.biot_modulus);
  put_block(t, B_w, op, ow, -tau);
  put_block(t, B_beta, om, ow, -tau);
  put_block(t, B_wT, ow, op, tau);
  put_block(t, B_betaT, ow, om, tau);
  put_block(t, M_w, ow, ow, tau);
  return from_triplets(dm.total(), dm.total(), t);
}

Vec BlockSystem::full_rhs() const {
  Vec b(dm.total());
  b << b_b, b_l, b_p, b_beta, b_w;
  return b;
}

State BlockSystem::split(const Vec& x) const {
  check_size(x, dm.total(), "BlockSystem::split");
  State s;
  s.u_bub = x.segment(dm.offset_bubble(), dm.n_bub);
  s.u_lin = x.segment(dm.offset_linear(), dm.n_ulin);
  s.p = x.segment(dm.offset_pressure(), dm.n_p);
  s.beta = x.segment(dm.offset_multiplier(), dm.n_beta);
  s.w = x.segment(dm.offset_velocity(), dm.n_w);
  return s;
}

Vec BlockSystem::join(const State& s) const {
  Vec x(dm.total());
  x << s.u_bub, s.u_lin, s.p, s.beta, s.w;
  return x;
}

CondensedSystem condense(const BlockSystem& sys) {
  if (sys.scheme == Scheme::enriched)
    throw std::invalid_argument("condense: the enriched bubble block is not diagonal");
  const DofMap& dm = sys.dm;
  const double a = sys.params.alpha, tau = sys.params.tau;

  CondensedSystem c;
  c.alpha = a;
  c.tau = tau;
  c.n_u = dm.n_ulin;
  c.n_p = dm.n_p;
  c.n_beta = dm.n_beta;
  c.M_p = sys.M_p;

  for (Eigen::Index i = 0; i < sys.D_bb.size(); ++i)
    if (!(sys.D_bb(i) > 0.0)) throw std::runtime_error("condense: non-positive bubble diagonal");
  c.D_inv = sys.D_bb.cwiseInverse();

  Triplets t_inv;
  for (const auto& blk : sys.w_blocks) {
    const int m = static_cast<int>(blk.size());
    if (m == 0) continue;
    Eigen::MatrixXd local(m, m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) local(i, j) = sys.M_w.coeff(blk[i], blk[j]);
    Eigen::LLT<Eigen::MatrixXd> llt(local);
    if (llt.info() != Eigen::Success) throw std::runtime_error("condense: singular element velocity block");
    const Eigen::MatrixXd inv = llt.solve(Eigen::MatrixXd::Identity(m, m));
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) t_inv.emplace_back(blk[i], blk[j], inv(i, j));
  }
  c.M_w_inv = from_triplets(dm.n_w, dm.n_w, t_inv);

  const SparseMat Dinv = diagonal_matrix(c.D_inv);
  const SparseMat DinvA = Dinv * sys.A_bl;            // n_bub x n_ulin
  const SparseMat BbT = sys.B_b.transpose();
  const SparseMat BwT = sys.B_w.transpose();
  const SparseMat BbetaT = sys.B_beta.transpose();
  const SparseMat MinvBwT = c.M_w_inv * BwT;           // n_w x n_p
  const SparseMat MinvBbetaT = c.M_w_inv * BbetaT;     // n_w x n_beta

  const SparseMat AlbDinvA = SparseMat(sys.A_bl.transpose()) * DinvA;
  const SparseMat BbDinvA = sys.B_b * DinvA;
  c.A_u = sys.A_ll - AlbDinvA;
  c.B_u = sys.B_l - BbDinvA;
  const SparseMat Mp = diagonal_matrix(sys.M_p / sys.params.biot_modulus);
  const SparseMat BbDinv = sys.B_b * Dinv;
  SparseMat BDB = BbDinv * BbT;
  SparseMat BMB = sys.B_w * MinvBwT;
  BDB *= a * a;
  BMB *= tau;
  c.B_p = Mp + BDB;
  c.B_p += BMB;
  c.C_pb = sys.B_w * MinvBbetaT;
  c.C_pb *= tau;
  c.C_bb = sys.B_beta * MinvBbetaT;
  c.C_bb *= tau;
  for (SparseMat* m : {&c.A_u, &c.B_u, &c.B_p, &c.C_pb, &c.C_bb}) m->prune(0.0), m->makeCompressed();

  const Vec Dinv_bb = c.D_inv.cwiseProduct(sys.b_b);
  const Vec Minv_bw = c.M_w_inv * sys.b_w;
  c.b_u = sys.b_l - sys.A_bl.transpose() * Dinv_bb;
  c.b_p = sys.b_p + a * (sys.B_b * Dinv_bb) + sys.B_w * Minv_bw;
  c.b_beta = sys.b_beta + sys.B_beta * Minv_bw;
  return c;
}

SparseMat CondensedSystem::matrix() const {
  Triplets t;
  const int op = n_u, om = n_u + n_p;
  const SparseMat B_uT = B_u.transpose(), C_pbT = C_pb.transpose();
  put_block(t, A_u, 0, 0);
  put_block(t, B_uT, 0, op, alpha);
  put_block(t, B_u, op, 0, -alpha);
  put_block(t, B_p, op, op);
  put_block(t, C_pb, op, om);
  put_block(t, C_pbT, om, op);
  put_block(t, C_bb, om, om);
  return from_triplets(size(), size(), t);
}

Vec CondensedSystem::rhs() const {
  Vec b(size());
  b << b_u, b_p, b_beta;
  return b;
}

SparseMat CondensedSystem::B_pbeta() const {
  Triplets t;
  const SparseMat C_pbT = C_pb.transpose();
  put_block(t, B_p, 0, 0);
  put_block(t, C_pb, 0, n_p);
  put_block(t, C_pbT, n_p, 0);
  put_block(t, C_bb, n_p, n_p);
  return from_triplets(n_p + n_beta, n_p + n_beta, t);
}

SparseMat CondensedSystem::B_upbeta() const {
  Triplets t;
  put_block(t, B_u, 0, 0);
  return from_triplets(n_p + n_beta, n_u, t);
}

State back_substitute(const BlockSystem& sys, const CondensedSystem& cond, const Vec& solution) {
  check_size(solution, cond.size(), "back_substitute");
  const double a = sys.params.alpha, tau = sys.params.tau;
  State s;
  s.u_lin = solution.head(cond.n_u);
  s.p = solution.segment(cond.n_u, cond.n_p);
  s.beta = solution.tail(cond.n_beta);
  s.u_bub = cond.D_inv.cwiseProduct(sys.b_b - sys.A_bl * s.u_lin - a * (sys.B_b.transpose() * s.p));
  s.w = cond.M_w_inv * (sys.b_w / tau - sys.B_w.transpose() * s.p - sys.B_beta.transpose() * s.beta);
  return s;
}

Vec solve_direct(const CondensedSystem& cond) {
  const Eigen::SparseMatrix<double> ae = cond.matrix();
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(ae);
  if (lu.info() != Eigen::Success) throw std::runtime_error("solve_direct: factorization of A^E failed");
  return lu.solve(cond.rhs());
}

State solve_monolithic(const BlockSystem& sys) {
  const Eigen::SparseMatrix<double> full = sys.full_matrix();
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(full);
  if (lu.info() != Eigen::Success) throw std::runtime_error("solve_monolithic: factorization of A^D failed");
  return sys.split(lu.solve(sys.full_rhs()));
}

StepResult step(const Mesh& mesh, const DofMap& dm, const PhysicalParams& params, const BoundarySpec& bc,
                const Loads& loads, const State& prev, Scheme scheme, const SolverConfig& cfg) {
  const BlockSystem sys = assemble_full(mesh, dm, params, bc, loads, prev, scheme);
  StepResult out;

  if (scheme == Scheme::enriched) {
    out.state = solve_monolithic(sys);
    out.report.converged = true;
    return out;
  }

  const CondensedSystem cond = condense(sys);
  const SparseMat ae = cond.matrix();
  const Vec rhs = cond.rhs();
  Vec x = Vec::Zero(cond.size());

  if (cfg.method == SolveMethod::direct) {
    x = solve_direct(cond);
    out.report.converged = true;
  } else {
    PrecondConfig pc;
    pc.kind = cfg.kind;
    pc.inexact = cfg.inexact;
    pc.inner_tol = cfg.inner_tol;
    pc.inner_max_iter = cfg.inner_max_iter;
    const BlockPreconditioner prec(cond, params, pc);
    KrylovOptions opts;
    opts.tol = cfg.tol;
    opts.max_iter = cfg.max_iter;
    out.report = fgmres([&ae](const Vec& v, Vec& y) { y = ae * v; }, prec.op(), rhs, x, opts);
    if (!out.report.converged)
      throw std::runtime_error("step: FGMRES did not converge (" + out.report.message + ", residual " +
                               std::to_string(out.report.final_residual()) + ")");
  }
  out.state = back_substitute(sys, cond, x);
  return out;
}

void write_matrix_market(const SparseMat& a, std::ostream& out) {
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << a.rows() << ' ' << a.cols() << ' ' << a.nonZeros() << '\n';
  out << std::setprecision(17);
  for (int i = 0; i < a.outerSize(); ++i)
    for (SparseMat::InnerIterator it(a, i); it; ++it) out << it.row() + 1 << ' ' << it.col() + 1 << ' ' << it.value() << '\n';
}

}  // namespace biot
