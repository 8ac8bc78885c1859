#pragma once

#include <array>
#include <span>

#include "mlswe/grid.hpp"

namespace mlswe {

/// Grass bedload flux Q_b = A_g |u|^2 u, odd in the near-bed velocity.
double grass_flux(double u, double ag);

/// Theta-weighted Exner update
///   z_b,i += xi dt/dx [ theta (Q_{i-1/2}-Q_{i+1/2})^{n+1}
///                       + (1-theta) (Q_{i-1/2}-Q_{i+1/2})^n ],
/// with Q the Grass flux of the bottom-layer edge velocities.
void exner_step_theta(const Grid1D& grid, std::span<const double> u1_old,
                      std::span<const double> u1_new, double dt, double theta,
                      double xi, double ag, std::span<double> bed);

/// Final IMEX assembly of the bed from the retained stage bottom velocities,
/// weighted by the tableau weights b.
void exner_step_imex(const Grid1D& grid,
                     std::array<std::span<const double>, 3> u1_stage,
                     std::span<const double> b_weights, double dt, double xi,
                     double ag, std::span<double> bed);

}  // namespace mlswe
