#include "mlswe/morphodynamics.hpp"

#include <cmath>

namespace mlswe {

double grass_flux(double u, double ag) { return ag * u * u * u; }

void exner_step_theta(const Grid1D& grid, std::span<const double> u1_old,
                      std::span<const double> u1_new, double dt, double theta,
                      double xi, double ag, std::span<double> bed) {
  for (int i = 0; i < grid.cells; ++i) {
    const double d_new = grass_flux(u1_new[i], ag) - grass_flux(u1_new[i + 1], ag);
    const double d_old = grass_flux(u1_old[i], ag) - grass_flux(u1_old[i + 1], ag);
    bed[i] += xi * dt / grid.dx[i] * (theta * d_new + (1.0 - theta) * d_old);
  }
}

void exner_step_imex(const Grid1D& grid,
                     std::array<std::span<const double>, 3> u1_stage,
                     std::span<const double> b_weights, double dt, double xi,
                     double ag, std::span<double> bed) {
  for (int i = 0; i < grid.cells; ++i) {
    double diff = 0.0;
    for (int j = 0; j < 3; ++j) {
      diff += b_weights[j] *
              (grass_flux(u1_stage[j][i], ag) - grass_flux(u1_stage[j][i + 1], ag));
    }
    bed[i] += xi * dt / grid.dx[i] * diff;
  }
}

}  // namespace mlswe
