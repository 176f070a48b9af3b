#pragma once

#include <functional>

#include "helmddm/medium.hpp"
#include "helmddm/partition.hpp"
#include "helmddm/types.hpp"

namespace helmddm {

/// Bessel functions of order zero via split rational approximations
/// (small-argument polynomial, large-argument amplitude/phase form).
/// Absolute error stays a couple of orders below 1e-6 across (0, 1e4].
double bessel_j0(double x);
double bessel_y0(double x);
double bessel_j1(double x);
double bessel_y1(double x);

/// H0^(1)(x) = J0(x) + i Y0(x), x > 0.
Complex hankel0(double x);

/// Radiating free-space kernel: (Lap + k^2) G = delta, G(r) = -(i/4) H0(kr).
Complex greens_kernel(double k, double r);

/// Gaussian source F(r) = amp * exp(-(w r)^2), radially symmetric.
struct RadialSource {
  double amp = 0, w = 0;
};

/// Outgoing solution for a radial source, reduced to 1D integrals:
///   u(r) = -(i/4) [ H0(kr) * 2 pi I_in(r) + J0(kr) * 2 pi I_out(r) ],
/// with I_in integrating J0(k rho) F rho over (0, r) and I_out integrating
/// H0(k rho) F rho over (r, inf). Outside the numerical support radius the
/// field is a pure multiple of H0(kr).
class RadialGreens {
 public:
  RadialGreens(double k, RadialSource F);
  Complex eval(double r) const;

 private:
  double k_, rmax_;
  RadialSource f_;
  Complex mass_;  // 2 pi I_in(rmax)
};

/// Midpoint-rule convolution of the kernel with an arbitrary source sampled
/// on a refine-times-finer lattice over the support box. Evaluation points
/// must avoid the sample points themselves or sit off-lattice; the half-step
/// offset of midpoint sampling takes care of Helmholtz lattice nodes.
Complex greens_convolution(double k,
                           const std::function<Complex(double, double)>& f,
                           const Box& support, double h_src, int refine,
                           double x, double y);

/// Factors and solves the full absorbing-window system in one shot. Meant
/// for modest sizes (about a million unknowns); f is in L-form units.
FieldGrid direct_solve_global(const GridSpec& g, const MediumModel& med,
                              double c_sigma, const std::vector<Complex>& f,
                              double sigma0_override = 0);

struct ErrorNorms {
  double l2_abs = 0, l2_rel = 0;
  double h1_abs = 0, h1_rel = 0;
};

/// Discrete norms of u - ref over the inclusive node rectangle
/// [p0,p1]x[q0,q1]: L2 = sqrt(h^2 sum |e|^2); the H1 version adds forward
/// differences between in-rectangle neighbor pairs and a k_ref-weighted mass
/// term. Relative versions divide by the same norm of ref.
ErrorNorms error_norms(const FieldGrid& u,
                       const std::function<Complex(double, double)>& ref,
                       const Lattice& lat, int p0, int p1, int q0, int q1,
                       double k_ref);

}  // namespace helmddm
