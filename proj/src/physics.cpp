#include "mlswe/physics.hpp"

#include <cmath>
#include <string>

#include "mlswe/errors.hpp"

namespace mlswe {

void PhysicsParams::validate() const {
  if (!(g > 0.0)) throw ConfigError("gravity must be positive");
  if (!(kappa > 0.0)) throw ConfigError("von Karman constant must be positive");
  if (!(dz0 > 0.0)) throw ConfigError("roughness length must be positive");
  if (cw < 0.0) throw ConfigError("wind drag coefficient must be nonnegative");
  if (grass_ag < 0.0) throw ConfigError("Grass constant must be nonnegative");
  if (!(porosity >= 0.0 && porosity < 1.0)) {
    throw ConfigError("porosity must lie in [0, 1)");
  }
  if (!(h_min > 0.0)) throw ConfigError("minimum depth must be positive");
}

double friction_coefficient(double h, double dz_r, const PhysicsParams& p) {
  if (!(dz_r < h) || !(dz_r > 0.0)) {
    throw ClosureError("friction coefficient needs 0 < dz_r < h, got dz_r = " +
                       std::to_string(dz_r) + ", h = " + std::to_string(h));
  }
  if (!(dz_r > p.dz0)) {
    throw ClosureError("bottom layer thinner than the roughness length (dz_r = " +
                       std::to_string(dz_r) + ", dz0 = " + std::to_string(p.dz0) + ")");
  }
  const double log_ratio = std::log(dz_r / p.dz0);
  return p.kappa * p.kappa * (1.0 - dz_r / h) / (log_ratio * log_ratio);
}

double friction_velocity_interface(double u1, double partial_height,
                                   const PhysicsParams& p) {
  if (!(partial_height > p.dz0)) {
    throw ClosureError("interface below the roughness length (height = " +
                       std::to_string(partial_height) + ")");
  }
  return std::abs(u1) * p.kappa / std::log(partial_height / p.dz0);
}

double interface_viscosity(int alpha, double h, const LayerScheme& scheme,
                           double ustar, const PhysicsParams& p) {
  const double below = scheme.cumulative[alpha] * h;
  const double above = 1.0 - scheme.cumulative[alpha];
  return p.kappa * ustar * below * above;
}

double bottom_stress(double u1, double cf) { return -cf * std::abs(u1) * u1; }

WindStress wind_stress(double u_top, const PhysicsParams& p) {
  const double rel = p.u_wind - u_top;
  WindStress w;
  w.cw_tilde = p.cw * std::abs(rel);
  w.stress = w.cw_tilde * rel;
  return w;
}

}  // namespace mlswe
