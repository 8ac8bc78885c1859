#pragma once

#include <array>
#include <optional>
#include <utility>
#include <vector>

#include "mlswe/assembly.hpp"
#include "mlswe/grid.hpp"
#include "mlswe/layers.hpp"
#include "mlswe/operators.hpp"
#include "mlswe/physics.hpp"
#include "mlswe/state.hpp"
#include "mlswe/tableaux.hpp"
#include "mlswe/tridiag.hpp"

namespace mlswe {

struct StepReport {
  double dt = 0.0;
  double c_vel = 0.0;
  double c_cel = 0.0;
  double fs_residual = 0.0;  ///< max-norm residual of the free-surface solves
};

/// Maximum Courant numbers (velocity, velocity + celerity) a step of size dt
/// would realize on this state.
std::pair<double, double> courant_numbers(const Grid1D& grid, const LayerLayout& layout,
                                          const State& state, double g, double dt);

struct StepperOptions {
  bool tracer = false;
  bool morphodynamics = false;
};

/// Scratch shared by the implicit steppers; one instance per stepper keeps
/// the hot loop allocation-free.
struct StepWorkspace {
  EdgeFields edges;
  FrozenClosures closures;
  std::vector<double> expl;      // F: advection + mass transfer, per edge-layer
  std::vector<double> stiff;     // I: surface gradient + vertical viscosity
  std::vector<double> rhs_f;     // rescaled momentum rhs per edge-layer
  std::vector<double> ainv_h;    // A^-1 H per edge-layer
  std::vector<double> ainv_f;    // A^-1 F per edge-layer
  std::vector<double> hta_h;     // H^T A^-1 H per edge
  std::vector<double> hta_f;     // H^T A^-1 F per edge
  std::vector<double> rhs_cell;
  std::vector<double> eta_new;
  std::vector<double> u_new;
  std::vector<double> transfer;  // per edge interface
  std::vector<double> g_center;  // per cell interface
  std::vector<double> rho_new;
  std::vector<double> u1_old, u1_new;  // bottom-layer edge velocities
  std::vector<double> col_a, col_b, col_c, col_x, col_scratch;
  TridiagonalSystem fs;
};

class ThetaStepper {
 public:
  ThetaStepper(const Grid1D& grid, const LayerLayout& layout,
               const PhysicsParams& physics, BoundaryConditions bc, double theta,
               StepperOptions options = {});

  StepReport step(State& state, double dt);
  double theta() const { return theta_; }

 private:
  const Grid1D& grid_;
  const LayerLayout& layout_;
  const PhysicsParams& physics_;
  BoundaryConditions bc_;
  double theta_;
  StepperOptions options_;
  StepWorkspace ws_;
};

class ImexArk2Stepper {
 public:
  ImexArk2Stepper(const Grid1D& grid, const LayerLayout& layout,
                  const PhysicsParams& physics, BoundaryConditions bc,
                  StepperOptions options = {});

  StepReport step(State& state, double dt);

 private:
  const Grid1D& grid_;
  const LayerLayout& layout_;
  const PhysicsParams& physics_;
  BoundaryConditions bc_;
  StepperOptions options_;
  ButcherTableaux tableaux_;
  StepWorkspace ws_;
  std::array<std::vector<double>, 3> u_stage_;
  std::array<std::vector<double>, 3> eta_stage_;
  std::array<std::vector<double>, 3> f_stage_;
  std::array<std::vector<double>, 3> i_stage_;
  std::array<std::vector<double>, 3> flux_stage_;
  std::array<std::vector<double>, 3> g_stage_;
  std::array<std::vector<double>, 3> rho_stage_;
  std::array<std::vector<double>, 3> u1_stage_;
};

/// Reference explicit integrator: three stage SSP Runge-Kutta with the time
/// step chosen so the celerity Courant number matches a target.
class Rk3Stepper {
 public:
  Rk3Stepper(const Grid1D& grid, const LayerLayout& layout,
             const PhysicsParams& physics, BoundaryConditions bc,
             double target_c_cel, StepperOptions options = {});

  /// Advance by one adaptive step of at most dt_cap. Returns the report with
  /// the dt actually taken.
  StepReport step(State& state, double dt_cap);

  double target_courant() const { return target_; }

 private:
  struct RkVector {
    std::vector<double> eta, u, q, bed;
  };

  void derivative(const State& s, double t, RkVector& out);
  void enforce_bc(State& s, double t);

  const Grid1D& grid_;
  const LayerLayout& layout_;
  const PhysicsParams& physics_;
  BoundaryConditions bc_;
  double target_;
  StepperOptions options_;
  StepWorkspace ws_;
  State stage_;
  RkVector y0_, k_;
  std::vector<double> q0_;  // tracer layer masses l h rho
};

}  // namespace mlswe
