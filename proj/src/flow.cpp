#include "shapeopt/flow.hpp"

#include <Eigen/UmfPackSupport>
#include <array>
#include <cmath>

#include "shapeopt/errors.hpp"

namespace shapeopt {

namespace {

// Brezzi-Pitkaranta stabilization: c(p, q) = kStab * h_T^2 / mu (grad p, grad q)_T
constexpr double kStab = 0.05;

struct TriGeom {
  double area;
  std::array<double, 3> bx;  // d/dx of the P1 basis
  std::array<double, 3> by;  // d/dy
  std::array<Vec2, 3> xm;    // edge midpoints, xm[i] opposite vertex i
  double h2;                 // squared diameter
};

TriGeom tri_geom(const OGridMesh& mesh, const std::array<int, 3>& t) {
  const Vec2 a = mesh.nodes[t[0]];
  const Vec2 b = mesh.nodes[t[1]];
  const Vec2 c = mesh.nodes[t[2]];
  TriGeom g;
  const double det = (b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y);
  g.area = 0.5 * det;
  g.bx = {(b.y - c.y) / det, (c.y - a.y) / det, (a.y - b.y) / det};
  g.by = {(c.x - b.x) / det, (a.x - c.x) / det, (b.x - a.x) / det};
  g.xm = {0.5 * (b + c), 0.5 * (c + a), 0.5 * (a + b)};
  const double e0 = (b - c).norm(), e1 = (c - a).norm(), e2 = (a - b).norm();
  const double h = std::max({e0, e1, e2});
  g.h2 = h * h;
  return g;
}

using Trip = Eigen::Triplet<double>;

void assemble(const OGridMesh& mesh, double mu, int sign, bool with_gauge,
              const FieldFn& forcing, std::vector<Trip>* trips, Eigen::VectorXd* rhs,
              const std::vector<bool>* skip_row) {
  const auto nn = static_cast<Eigen::Index>(mesh.n_nodes());
  const double s = static_cast<double>(sign);

  auto keep = [&](Eigen::Index r) { return !skip_row || !(*skip_row)[r]; };
  auto add = [&](Eigen::Index r, Eigen::Index c, double v) {
    if (trips && keep(r)) trips->emplace_back(r, c, v);
  };

  for (const auto& t : mesh.tris) {
    const TriGeom g = tri_geom(mesh, t);
    const double delta = kStab * g.h2 / mu;

    for (int i = 0; i < 3; ++i) {
      const Eigen::Index vx_i = t[i], vy_i = nn + t[i], p_i = 2 * nn + t[i];
      for (int j = 0; j < 3; ++j) {
        const Eigen::Index vx_j = t[j], vy_j = nn + t[j], p_j = 2 * nn + t[j];
        const double lap = mu * g.area * (g.bx[i] * g.bx[j] + g.by[i] * g.by[j]);
        add(vx_i, vx_j, lap);
        add(vy_i, vy_j, lap);
        // -s (p, div w): p linear, grad w constant
        add(vx_i, p_j, -s * g.area * g.bx[i] / 3.0);
        add(vy_i, p_j, -s * g.area * g.by[i] / 3.0);
        // s (q, div v)
        add(p_i, vx_j, s * g.area * g.bx[j] / 3.0);
        add(p_i, vy_j, s * g.area * g.by[j] / 3.0);
        // stabilization
        add(p_i, p_j, delta * g.area * (g.bx[i] * g.bx[j] + g.by[i] * g.by[j]));
      }
      if (forcing && rhs) {
        // edge-midpoint quadrature, basis value 1/2 on the two adjacent edges
        Vec2 fi = {0.0, 0.0};
        Vec2 fbar = {0.0, 0.0};
        for (int e = 0; e < 3; ++e) {
          const Vec2 fe = forcing(g.xm[e]);
          fbar = fbar + (1.0 / 3.0) * fe;
          if (e != i) fi = fi + 0.5 * (g.area / 3.0) * fe;
        }
        if (keep(vx_i)) (*rhs)[vx_i] += fi.x;
        if (keep(vy_i)) (*rhs)[vy_i] += fi.y;
        // stabilization consistency: grad p = s * f element-wise for P1
        if (keep(p_i))
          (*rhs)[p_i] += s * delta * g.area * (fbar.x * g.bx[i] + fbar.y * g.by[i]);
      }
    }
    if (with_gauge) {
      const Eigen::Index gauge = 3 * nn;
      for (int i = 0; i < 3; ++i) {
        const Eigen::Index p_i = 2 * nn + t[i];
        add(p_i, gauge, g.area / 3.0);
        add(gauge, p_i, g.area / 3.0);
      }
    }
  }
}

}  // namespace

Eigen::SparseMatrix<double> assemble_stokes_matrix(const OGridMesh& mesh, double mu,
                                                   int pressure_sign, bool with_gauge) {
  const auto nn = static_cast<Eigen::Index>(mesh.n_nodes());
  const Eigen::Index dim = 3 * nn + (with_gauge ? 1 : 0);
  std::vector<Trip> trips;
  trips.reserve(mesh.tris.size() * 40);
  assemble(mesh, mu, pressure_sign, with_gauge, nullptr, &trips, nullptr, nullptr);
  Eigen::SparseMatrix<double> K(dim, dim);
  K.setFromTriplets(trips.begin(), trips.end());
  return K;
}

struct StokesSolver::Impl {
  const OGridMesh& mesh;
  double mu;
  double tol;
  Eigen::Index nn, dim;
  std::vector<bool> bc;
  Eigen::SparseMatrix<double> K;  // primal operator with Dirichlet rows blanked
  Eigen::UmfPackLU<Eigen::SparseMatrix<double>> lu;

  Impl(const OGridMesh& m, double mu_, double tol_) : mesh(m), mu(mu_), tol(tol_) {
    if (!(mu > 0.0)) throw SolverError("viscosity must be positive");
    nn = static_cast<Eigen::Index>(mesh.n_nodes());
    dim = 3 * nn + 1;
    bc.assign(static_cast<std::size_t>(dim), false);
    for (Eigen::Index i = 0; i < nn; ++i) {
      const auto idx = static_cast<std::size_t>(i);
      if (mesh.on_wall(idx) || mesh.on_farfield(idx))
        bc[static_cast<std::size_t>(i)] = bc[static_cast<std::size_t>(nn + i)] = true;
    }

    std::vector<Trip> trips;
    trips.reserve(mesh.tris.size() * 40);
    assemble(mesh, mu, +1, true, nullptr, &trips, nullptr, &bc);
    for (Eigen::Index i = 0; i < dim; ++i)
      if (bc[static_cast<std::size_t>(i)]) trips.emplace_back(i, i, 1.0);

    K.resize(dim, dim);
    K.setFromTriplets(trips.begin(), trips.end());
    K.makeCompressed();
    lu.compute(K);
    if (lu.info() != Eigen::Success)
      throw SolverError("Stokes factorization failed (singular system?)");
  }

  // The adjoint operator (pressure_sign = -1) equals D K D with
  // D = diag(+I on velocity, -I on pressure, -1 on the gauge), so the
  // primal factorization serves both: x = D K^{-1} D b.
  StokesSolution run(int sign, const FieldFn& forcing, const FieldFn& wall_velocity,
                     const FieldFn& farfield_velocity) const {
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(dim);
    for (Eigen::Index i = 0; i < nn; ++i) {
      const auto idx = static_cast<std::size_t>(i);
      const FieldFn* f = nullptr;
      if (mesh.on_wall(idx))
        f = &wall_velocity;
      else if (mesh.on_farfield(idx))
        f = &farfield_velocity;
      if (!f) continue;
      const Vec2 val = (*f)(mesh.nodes[idx]);
      rhs[i] = val.x;
      rhs[nn + i] = val.y;
    }
    if (forcing) assemble(mesh, mu, sign, true, forcing, nullptr, &rhs, &bc);

    if (sign == -1) rhs.segment(2 * nn, nn + 1) *= -1.0;
    Eigen::VectorXd x = lu.solve(rhs);
    const double res = (K * x - rhs).norm();
    const double rel = res / (rhs.norm() + 1e-300);
    if (!(rel < tol) && !(res < tol))
      throw SolverError("Stokes solve did not converge, residual " +
                        std::to_string(rel));
    if (sign == -1) x.segment(2 * nn, nn + 1) *= -1.0;

    StokesSolution sol;
    sol.residual_norm = rel;
    sol.v.resize(static_cast<std::size_t>(nn));
    sol.p.resize(static_cast<std::size_t>(nn));
    for (Eigen::Index i = 0; i < nn; ++i) {
      sol.v[static_cast<std::size_t>(i)] = {x[i], x[nn + i]};
      sol.p[static_cast<std::size_t>(i)] = x[2 * nn + i];
    }
    return sol;
  }
};

StokesSolver::StokesSolver(const OGridMesh& mesh, double mu, double tol)
    : impl_(std::make_unique<Impl>(mesh, mu, tol)) {}

StokesSolver::~StokesSolver() = default;

StokesSolution StokesSolver::solve(int pressure_sign, const FieldFn& forcing,
                                   const FieldFn& wall_velocity,
                                   const FieldFn& farfield_velocity) const {
  if (pressure_sign != 1 && pressure_sign != -1)
    throw SolverError("pressure_sign must be +1 or -1");
  return impl_->run(pressure_sign, forcing, wall_velocity, farfield_velocity);
}

FlowState StokesSolver::solve_primal(const FlowConfig& cfg) const {
  const Vec2 uinf = cfg.u_inf;
  StokesSolution s = impl_->run(+1, nullptr, [](Vec2) { return Vec2{0.0, 0.0}; },
                                [uinf](Vec2) { return uinf; });
  return {std::move(s.v), std::move(s.p), s.residual_norm};
}

AdjointState StokesSolver::solve_adjoint(const FlowConfig& cfg) const {
  const Vec2 a = cfg.drag_dir();
  StokesSolution s = impl_->run(-1, nullptr, [a](Vec2) { return Vec2{-a.x, -a.y}; },
                                [](Vec2) { return Vec2{0.0, 0.0}; });
  return {std::move(s.v), std::move(s.p), s.residual_norm};
}

StokesSolution solve_stokes_system(const OGridMesh& mesh, double mu, int pressure_sign,
                                   const FieldFn& forcing, const FieldFn& wall_velocity,
                                   const FieldFn& farfield_velocity, double tol) {
  StokesSolver solver(mesh, mu, tol);
  return solver.solve(pressure_sign, forcing, wall_velocity, farfield_velocity);
}

FlowState solve_stokes(const OGridMesh& mesh, const FlowConfig& cfg) {
  return StokesSolver(mesh, cfg.mu, cfg.tol).solve_primal(cfg);
}

AdjointState solve_adjoint(const OGridMesh& mesh, const FlowConfig& cfg) {
  return StokesSolver(mesh, cfg.mu, cfg.tol).solve_adjoint(cfg);
}

namespace {

// Fornberg weights for the m-th derivative at x = 0 given sample
// locations z (distinct). Returns one weight per sample.
std::vector<double> fd_weights(const std::vector<double>& z, int m) {
  const int n = static_cast<int>(z.size()) - 1;
  std::vector<std::vector<double>> c(
      static_cast<std::size_t>(n + 1),
      std::vector<double>(static_cast<std::size_t>(m + 1), 0.0));
  double c1 = 1.0;
  double c4 = z[0];
  c[0][0] = 1.0;
  for (int i = 1; i <= n; ++i) {
    const int mn = std::min(i, m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = z[static_cast<std::size_t>(i)];
    for (int j = 0; j <= i - 1; ++j) {
      const double c3 = z[static_cast<std::size_t>(i)] - z[static_cast<std::size_t>(j)];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k)
          c[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] =
              c1 *
              (k * c[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(k - 1)] -
               c5 * c[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(k)]) /
              c2;
        c[static_cast<std::size_t>(i)][0] =
            -c1 * c5 * c[static_cast<std::size_t>(i - 1)][0] / c2;
      }
      for (int k = mn; k >= 1; --k)
        c[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)] =
            (c4 * c[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)] -
             k * c[static_cast<std::size_t>(j)][static_cast<std::size_t>(k - 1)]) /
            c3;
      c[static_cast<std::size_t>(j)][0] =
          c4 * c[static_cast<std::size_t>(j)][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(z.size());
  for (std::size_t i = 0; i < z.size(); ++i)
    w[i] = c[i][static_cast<std::size_t>(m)];
  return w;
}

}  // namespace

SurfaceField wall_normal_derivative(const OGridMesh& mesh,
                                    const std::vector<double>& field, int order) {
  if (order != 1 && order != 2)
    throw MeshError("wall_normal_derivative: order must be 1 or 2");
  const std::size_t npts = (order == 1) ? 3 : 4;
  if (mesh.n_rings < 4)
    throw MeshError("wall_normal_derivative: insufficient layers (need N_r >= 4)");
  if (field.size() != mesh.n_nodes())
    throw MeshError("wall_normal_derivative: field size mismatch");

  const std::size_t n = mesh.n_surface();
  SurfaceField out(n);
  out.seg_len = mesh.surface.seg_len;
  std::vector<double> z(npts), vals(npts);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t m = 0; m < npts; ++m) {
      z[m] = mesh.wall_dist[mesh.node_index(j, m)];
      vals[m] = field[mesh.node_index(j, m)];
    }
    const std::vector<double> w = fd_weights(z, order);
    double d = 0.0;
    for (std::size_t m = 0; m < npts; ++m) d += w[m] * vals[m];
    out[j] = d;
  }
  return out;
}

}  // namespace shapeopt
