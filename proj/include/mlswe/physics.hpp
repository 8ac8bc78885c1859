#pragma once

#include "mlswe/layers.hpp"

namespace mlswe {

/// Physical constants and closure parameters. All stresses are handled
/// kinematically (divided by the reference density), so rho0 never enters
/// any computation here.
struct PhysicsParams {
  double g = 9.81;          ///< gravity, m/s^2
  double kappa = 0.41;      ///< von Karman constant
  double dz0 = 3.3e-5;      ///< roughness length, m
  double cw = 1.2e-6;       ///< wind drag coefficient
  double u_wind = 0.0;      ///< wind velocity, m/s
  double rho0 = 1000.0;     ///< reference density, kg/m^3 (bookkeeping only)
  double grass_ag = 0.0;    ///< Grass bedload constant
  double porosity = 0.4;    ///< sediment bed porosity
  double h_min = 1e-6;      ///< minimum water depth before a step aborts, m

  double xi() const { return 1.0 / (1.0 - porosity); }

  /// Throws ConfigError when a parameter is outside its admissible range.
  void validate() const;
};

/// Log-law bottom friction coefficient
///   C_f = kappa^2 (1 - dz_r/h) / ln^2(dz_r/dz0).
/// Requires dz0 < dz_r < h; throws ClosureError otherwise (a violation
/// signals drying or a mis-set roughness length).
double friction_coefficient(double h, double dz_r, const PhysicsParams& p);

/// Friction velocity at an interior interface,
///   u* = |u1| kappa / ln(partial_height / dz0),
/// with partial_height the water column below the interface.
double friction_velocity_interface(double u1, double partial_height,
                                   const PhysicsParams& p);

/// Parabolic turbulent viscosity at interface alpha+1/2 (alpha in 1..N-1):
///   nu = kappa u* (sum_{b<=alpha} l_b h) (sum_{g>alpha} l_g).
double interface_viscosity(int alpha, double h, const LayerScheme& scheme,
                           double ustar, const PhysicsParams& p);

/// Kinematic bottom stress -C_f |u1| u1.
double bottom_stress(double u1, double cf);

struct WindStress {
  double stress = 0.0;    ///< kinematic surface stress Cw |uw-uN| (uw-uN)
  double cw_tilde = 0.0;  ///< linearized coefficient Cw |uw-uN|
};

/// Quadratic wind stress on the top layer.
WindStress wind_stress(double u_top, const PhysicsParams& p);

}  // namespace mlswe
