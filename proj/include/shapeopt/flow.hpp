#pragma once

#include <Eigen/Sparse>
#include <functional>
#include <memory>
#include <vector>

#include "shapeopt/geometry.hpp"
#include "shapeopt/surface_field.hpp"

namespace shapeopt {

struct FlowConfig {
  double mu = 0.798e-3;       // dynamic viscosity [Pa s]
  Vec2 u_inf = {1e-5, 0.0};   // farfield velocity [m/s]
  double rho = 998.2;         // farfield density, recorded for Re reporting only
  double phi = 0.0;           // angle of attack [rad]
  double tol = 1e-8;          // relative residual tolerance of the linear solve

  Vec2 drag_dir() const { return {std::cos(phi), std::sin(phi)}; }
  double reynolds(double diameter) const {
    return rho * u_inf.norm() * diameter / mu;
  }
};

struct FlowState {
  std::vector<Vec2> v;        // velocity per mesh node
  std::vector<double> p;      // pressure per mesh node
  double residual_norm = 0.0;
};

struct AdjointState {
  std::vector<Vec2> lambda;
  std::vector<double> lambda_p;
  double residual_norm = 0.0;
};

using FieldFn = std::function<Vec2(Vec2)>;

/// Assembles the stabilized P1/P1 Stokes operator without boundary
/// conditions. pressure_sign = +1 gives the primal operator
/// (-mu lap v + grad p, div v), -1 the adjoint one (-mu lap l - grad l_p,
/// div l with the continuity row negated). Dof layout: [vx | vy | p | gauge],
/// the gauge row/column enforcing zero mean pressure is appended when
/// with_gauge is set.
Eigen::SparseMatrix<double> assemble_stokes_matrix(const OGridMesh& mesh, double mu,
                                                   int pressure_sign, bool with_gauge);

struct StokesSolution {
  std::vector<Vec2> v;
  std::vector<double> p;
  double residual_norm = 0.0;
};

/// Direct solve of the stabilized system with strong Dirichlet velocity
/// data on the wall (ring 0) and farfield ring, optional body force, and
/// zero-mean pressure gauge. Used by both the physical solves and the
/// manufactured-solution tests.
StokesSolution solve_stokes_system(const OGridMesh& mesh, double mu, int pressure_sign,
                                   const FieldFn& forcing, const FieldFn& wall_velocity,
                                   const FieldFn& farfield_velocity, double tol = 1e-8);

/// Factorizes the primal operator once per mesh and serves both primal and
/// adjoint solves: the adjoint operator is a diagonal sign conjugation of
/// the primal one (pressure and gauge dofs flipped), so a single LU covers
/// both. The mesh must outlive the solver.
class StokesSolver {
 public:
  StokesSolver(const OGridMesh& mesh, double mu, double tol = 1e-8);
  ~StokesSolver();
  StokesSolver(const StokesSolver&) = delete;
  StokesSolver& operator=(const StokesSolver&) = delete;

  StokesSolution solve(int pressure_sign, const FieldFn& forcing,
                       const FieldFn& wall_velocity,
                       const FieldFn& farfield_velocity) const;

  FlowState solve_primal(const FlowConfig& cfg) const;
  AdjointState solve_adjoint(const FlowConfig& cfg) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

FlowState solve_stokes(const OGridMesh& mesh, const FlowConfig& cfg);

AdjointState solve_adjoint(const OGridMesh& mesh, const FlowConfig& cfg);

/// One-sided nonuniform-spacing derivative of a nodal field along the
/// xi2-line at the wall. order 1: 3-point first derivative, order 2:
/// 4-point second derivative.
SurfaceField wall_normal_derivative(const OGridMesh& mesh,
                                    const std::vector<double>& field, int order);

}  // namespace shapeopt
