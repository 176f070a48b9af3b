#include "helmddm/pml.hpp"

#include <algorithm>

namespace helmddm {

double shifted_sigma(const PmlProfile& prof, double t) {
  if (t <= prof.d_shift) return 0.0;
  if (t >= prof.d_shift + prof.d) return prof.sigma0;
  double s = (t - prof.d_shift) / prof.d;
  return prof.sigma0 * s * s;
}

double default_sigma0(double c_sigma, double k_min, double d) {
  return 3.0 * c_sigma / (k_min * d);
}

StretchCoeffs stretch_coeffs(const PmlProfile& prof, const Box& box, double x,
                             double y) {
  double tx = std::max({box.x0 - x, x - box.x1, 0.0});
  double ty = std::max({box.y0 - y, y - box.y1, 0.0});
  Complex a1(1.0, shifted_sigma(prof, tx));
  Complex a2(1.0, shifted_sigma(prof, ty));
  return {a1, a2, a2 / a1, a1 / a2, a1 * a2};
}

}  // namespace helmddm
