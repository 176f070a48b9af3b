#pragma once

#include "helmddm/types.hpp"

namespace helmddm {

/// Absorption profile for one coordinate direction. The strength grows
/// quadratically from zero over a ramp of width d, after an optional inner
/// collar of width d_shift where it stays exactly zero, and saturates at
/// sigma0 past the ramp.
struct PmlProfile {
  double sigma0 = 0;   // plateau strength
  double d = 0;        // ramp width
  double d_shift = 0;  // zero collar before the ramp (0 disables the shift)
};

/// Profile value at distance t past a box face (t <= 0 inside the box).
double shifted_sigma(const PmlProfile& prof, double t);

/// Plateau strength chosen so that k_min * integral of the ramp equals
/// c_sigma, i.e. sigma0 = 3 c_sigma / (k_min d).
double default_sigma0(double c_sigma, double k_min, double d);

/// Diagonal stretching data at one point for a box-anchored absorber:
/// alpha_j = 1 + i sigma_j, a11 = alpha2/alpha1, a22 = alpha1/alpha2,
/// jac = alpha1 * alpha2.
struct StretchCoeffs {
  Complex alpha1, alpha2, a11, a22, jac;
};

StretchCoeffs stretch_coeffs(const PmlProfile& prof, const Box& box, double x,
                             double y);

}  // namespace helmddm
