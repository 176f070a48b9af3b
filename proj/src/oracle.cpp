#include "helmddm/oracle.hpp"

#include <cmath>

#include "helmddm/discretize.hpp"
#include "helmddm/pml.hpp"
#include "helmddm/sparse.hpp"

namespace helmddm {

namespace {
constexpr double kTwoOverPi = 0.63661977236758134308;
constexpr double kQuarterPi = 0.78539816339744830962;
constexpr double kThreeQuarterPi = 2.35619449019234492885;
}  // namespace

double bessel_j0(double x) {
  const double ax = std::fabs(x);
  if (ax < 8.0) {
    const double y = x * x;
    const double r =
        57568490574.0 +
        y * (-13362590354.0 +
             y * (651619640.7 +
                  y * (-11214424.18 + y * (77392.33017 + y * -184.9052456))));
    const double s =
        57568490411.0 +
        y * (1029532985.0 +
             y * (9494680.718 + y * (59272.64853 + y * (267.8532712 + y))));
    return r / s;
  }
  const double z = 8.0 / ax, y = z * z;
  const double p =
      1.0 + y * (-0.1098628627e-2 +
                 y * (0.2734510407e-4 +
                      y * (-0.2073370639e-5 + y * 0.2093887211e-6)));
  const double q =
      -0.1562499995e-1 +
      y * (0.1430488765e-3 +
           y * (-0.6911147651e-5 + y * (0.7621095161e-6 + y * -0.934935152e-7)));
  const double xx = ax - kQuarterPi;
  return std::sqrt(kTwoOverPi / ax) *
         (std::cos(xx) * p - z * std::sin(xx) * q);
}

double bessel_y0(double x) {
  if (x < 8.0) {
    const double y = x * x;
    const double r =
        -2957821389.0 +
        y * (7062834065.0 +
             y * (-512359803.6 +
                  y * (10879881.29 + y * (-86327.92757 + y * 228.4622733))));
    const double s =
        40076544269.0 +
        y * (745249964.8 +
             y * (7189466.438 + y * (47447.26470 + y * (226.1030244 + y))));
    return r / s + kTwoOverPi * bessel_j0(x) * std::log(x);
  }
  const double z = 8.0 / x, y = z * z;
  const double p =
      1.0 + y * (-0.1098628627e-2 +
                 y * (0.2734510407e-4 +
                      y * (-0.2073370639e-5 + y * 0.2093887211e-6)));
  const double q =
      -0.1562499995e-1 +
      y * (0.1430488765e-3 +
           y * (-0.6911147651e-5 + y * (0.7621095161e-6 + y * -0.934935152e-7)));
  const double xx = x - kQuarterPi;
  return std::sqrt(kTwoOverPi / x) * (std::sin(xx) * p + z * std::cos(xx) * q);
}

double bessel_j1(double x) {
  const double ax = std::fabs(x);
  if (ax < 8.0) {
    const double y = x * x;
    const double r =
        x * (72362614232.0 +
             y * (-7895059235.0 +
                  y * (242396853.1 +
                       y * (-2972611.439 +
                            y * (15704.48260 + y * -30.16036606)))));
    const double s =
        144725228442.0 +
        y * (2300535178.0 +
             y * (18583304.74 + y * (99447.43394 + y * (376.9991397 + y))));
    return r / s;
  }
  const double z = 8.0 / ax, y = z * z;
  const double p =
      1.0 + y * (0.183105e-2 +
                 y * (-0.3516396496e-4 +
                      y * (0.2457520174e-5 + y * -0.240337019e-6)));
  const double q =
      0.04687499995 +
      y * (-0.2002690873e-3 +
           y * (0.8449199096e-5 + y * (-0.88228987e-6 + y * 0.105787412e-6)));
  const double xx = ax - kThreeQuarterPi;
  const double v =
      std::sqrt(kTwoOverPi / ax) * (std::cos(xx) * p - z * std::sin(xx) * q);
  return x < 0 ? -v : v;
}

double bessel_y1(double x) {
  if (x < 8.0) {
    const double y = x * x;
    const double r =
        x * (-4.900604943e12 +
             y * (1.275274390e12 +
                  y * (-5.153438139e10 +
                       y * (7.349264551e8 +
                            y * (-4.237922726e6 + y * 8.511937935e3)))));
    const double s =
        2.499580570e13 +
        y * (4.244419664e11 +
             y * (3.733650367e9 +
                  y * (2.245904002e7 +
                       y * (1.020426050e5 + y * (3.549632885e2 + y)))));
    return r / s + kTwoOverPi * (bessel_j1(x) * std::log(x) - 1.0 / x);
  }
  const double z = 8.0 / x, y = z * z;
  const double p =
      1.0 + y * (0.183105e-2 +
                 y * (-0.3516396496e-4 +
                      y * (0.2457520174e-5 + y * -0.240337019e-6)));
  const double q =
      0.04687499995 +
      y * (-0.2002690873e-3 +
           y * (0.8449199096e-5 + y * (-0.88228987e-6 + y * 0.105787412e-6)));
  const double xx = x - kThreeQuarterPi;
  return std::sqrt(kTwoOverPi / x) * (std::sin(xx) * p + z * std::cos(xx) * q);
}

Complex hankel0(double x) { return {bessel_j0(x), bessel_y0(x)}; }

Complex greens_kernel(double k, double r) {
  return Complex(0, -0.25) * hankel0(k * r);
}

namespace {

// Composite Simpson rule with n panels (n made even).
template <class F>
Complex simpson(const F& f, double a, double b, int n) {
  if (b <= a) return 0;
  n += n & 1;
  const double h = (b - a) / n;
  Complex s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * double(i & 1 ? 4 : 2);
  return s * (h / 3.0);
}

}  // namespace

RadialGreens::RadialGreens(double k, RadialSource F) : k_(k), f_(F) {
  rmax_ = 6.5 / F.w;
  auto inner = [&](double rho) -> Complex {
    return bessel_j0(k_ * rho) * f_.amp * std::exp(-f_.w * f_.w * rho * rho) *
           rho;
  };
  mass_ = 2.0 * M_PI * simpson(inner, 0.0, rmax_, 2048);
}

Complex RadialGreens::eval(double r) const {
  const Complex pre(0, -0.25);
  auto src = [&](double rho) {
    return f_.amp * std::exp(-f_.w * f_.w * rho * rho) * rho;
  };
  auto inner = [&](double rho) -> Complex { return bessel_j0(k_ * rho) * src(rho); };
  auto outer = [&](double rho) -> Complex {
    if (rho <= 0) return 0;  // H0 rho -> 0 in the limit
    return hankel0(k_ * rho) * src(rho);
  };
  if (r >= rmax_) return pre * mass_ * hankel0(k_ * r);
  const Complex iin = 2.0 * M_PI * simpson(inner, 0.0, r, 1024);
  const Complex iout = 2.0 * M_PI * simpson(outer, r, rmax_, 2048);
  Complex u = bessel_j0(k_ * r) * iout;
  if (r > 0) u += hankel0(k_ * r) * iin;
  return pre * u;
}

Complex greens_convolution(double k,
                           const std::function<Complex(double, double)>& f,
                           const Box& support, double h_src, int refine,
                           double x, double y) {
  const double hs = h_src / refine;
  const int nx = int(std::ceil(support.width() / hs - 0.5)) + 1;
  const int ny = int(std::ceil(support.height() / hs - 0.5)) + 1;
  Complex u = 0;
  for (int b = 0; b < ny; ++b) {
    const double ys = support.y0 + (b + 0.5) * hs;
    for (int a = 0; a < nx; ++a) {
      const double xs = support.x0 + (a + 0.5) * hs;
      const double r = std::hypot(x - xs, y - ys);
      if (r == 0) continue;
      u += greens_kernel(k, r) * f(xs, ys);
    }
  }
  return u * (hs * hs);
}

FieldGrid direct_solve_global(const GridSpec& g, const MediumModel& med,
                              double c_sigma, const std::vector<Complex>& f,
                              double sigma0_override) {
  MediumModel m = med;
  m.margin = std::max(m.margin, (g.n_ext() + 1) * g.h);
  const double sigma0 =
      sigma0_override > 0 ? sigma0_override
                          : default_sigma0(c_sigma, m.k_min(), g.n_ramp * g.h);
  DiscreteOperator op =
      build_operator(g, g.global_window(), global_layout(g), m, sigma0);
  const size_t n = op.k2.size();
  if (n != f.size()) throw SolveError("source vector size mismatch");
  if (n > 2500000) throw SolveError("direct solve limited to small windows");
  Factorization fact;
  fact.factor(op.assemble(), grid_nd_order(op.win.nx, op.win.ny));
  FieldGrid out;
  out.win = op.win;
  out.h = g.h;
  out.v.assign(n, Complex(0));
  std::vector<Complex> b(n);
  op.scale_rhs(f.data(), b.data());
  fact.solve(b.data(), out.v.data());
  return out;
}

ErrorNorms error_norms(const FieldGrid& u,
                       const std::function<Complex(double, double)>& ref,
                       const Lattice& lat, int p0, int p1, int q0, int q1,
                       double k_ref) {
  const int nx = p1 - p0 + 1, ny = q1 - q0 + 1;
  std::vector<Complex> e(size_t(nx) * ny), rv(size_t(nx) * ny);
  for (int q = q0; q <= q1; ++q)
    for (int p = p0; p <= p1; ++p) {
      const size_t i = size_t(q - q0) * nx + (p - p0);
      rv[i] = ref(lat.x(p), lat.y(q));
      e[i] = u.at(p, q) - rv[i];
    }
  const double h2 = u.h * u.h, k2 = k_ref * k_ref;
  double e_l2 = 0, r_l2 = 0, e_h1 = 0, r_h1 = 0;
  for (size_t i = 0; i < e.size(); ++i) {
    e_l2 += std::norm(e[i]);
    r_l2 += std::norm(rv[i]);
  }
  e_h1 = k2 * e_l2;
  r_h1 = k2 * r_l2;
  const double ih2 = 1.0 / h2;
  for (int b = 0; b < ny; ++b)
    for (int a = 0; a + 1 < nx; ++a) {
      const size_t i = size_t(b) * nx + a;
      e_h1 += std::norm(e[i + 1] - e[i]) * ih2;
      r_h1 += std::norm(rv[i + 1] - rv[i]) * ih2;
    }
  for (int b = 0; b + 1 < ny; ++b)
    for (int a = 0; a < nx; ++a) {
      const size_t i = size_t(b) * nx + a;
      e_h1 += std::norm(e[i + nx] - e[i]) * ih2;
      r_h1 += std::norm(rv[i + nx] - rv[i]) * ih2;
    }
  ErrorNorms out;
  out.l2_abs = std::sqrt(h2 * e_l2);
  out.h1_abs = std::sqrt(h2 * e_h1);
  out.l2_rel = r_l2 > 0 ? std::sqrt(e_l2 / r_l2) : out.l2_abs;
  out.h1_rel = r_h1 > 0 ? std::sqrt(e_h1 / r_h1) : out.h1_abs;
  return out;
}

}  // namespace helmddm
