#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "helmddm/ddm.hpp"
#include "helmddm/medium.hpp"
#include "helmddm/oracle.hpp"

using namespace helmddm;

namespace {

DdmConfig make_cfg(int mx, int n1, int n2, double freq, int n_ov, int n_ramp) {
  DdmConfig cfg;
  cfg.grid.h = 1.0 / mx;
  cfg.grid.mx = mx;
  cfg.grid.my = mx;
  cfg.grid.n1 = n1;
  cfg.grid.n2 = n2;
  cfg.grid.n_overlap = n_ov;
  cfg.grid.n_ramp = n_ramp;
  cfg.medium.kind = MediumKind::Constant;
  cfg.medium.omega = 2 * M_PI * freq;
  cfg.medium.velocity = 1;
  cfg.medium.interior = cfg.grid.interior_box();
  cfg.medium.margin = (cfg.grid.n_ext() + 1) * cfg.grid.h;
  return cfg;
}

std::vector<Complex> point_source(const DdmEngine& eng, double x, double y) {
  SourceSpec src;
  src.kind = SourceKind::PointDelta;
  src.x = x;
  src.y = y;
  const FieldGrid f = sample_source(src, eng.grid().lattice(),
                                    eng.grid().global_window(), 1.0);
  return f.v;
}

double rel_l2(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  double num = 0, den = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    num += std::norm(a[i] - b[i]);
    den += std::norm(b[i]);
  }
  return std::sqrt(num / den);
}

}  // namespace

TEST_CASE("single-window engine reproduces the direct solve in one sweep") {
  DdmConfig cfg = make_cfg(40, 1, 1, 4.0, 4, 8);
  DdmEngine eng(cfg);
  const std::vector<Complex> f = point_source(eng, 0.52, 0.47);
  DdmStats st;
  const FieldGrid u = eng.solve_iterative(f, 1e-12, 5, st);
  CHECK(st.converged);
  CHECK(st.steps == 1);
  CHECK(st.solves == 1);
  CHECK(st.relres <= 1e-12);

  const FieldGrid ud = direct_solve_global(cfg.grid, cfg.medium, cfg.c_sigma, f);
  double num = 0, den = 0;
  for (size_t i = 0; i < u.v.size(); ++i) {
    num = std::max(num, std::abs(u.v[i] - ud.v[i]));
    den = std::max(den, std::abs(ud.v[i]));
  }
  CHECK(num <= 1e-11 * den);
}

TEST_CASE("zero source converges immediately to zero") {
  DdmEngine eng(make_cfg(40, 2, 2, 4.0, 4, 8));
  std::vector<Complex> f(eng.n_global(), Complex(0));
  DdmStats st;
  const FieldGrid u = eng.solve_iterative(f, 1e-8, 10, st);
  CHECK(st.converged);
  CHECK(st.solves == 0);
  for (const Complex& z : u.v) CHECK(z == Complex(0));
}

TEST_CASE("field spreads one neighbor ring per sweep") {
  DdmConfig cfg = make_cfg(80, 4, 4, 4.0, 4, 8);
  DdmEngine eng(cfg);
  const Partition& part = eng.partition();
  const std::vector<Complex> f = point_source(eng, 0.1, 0.1);

  const auto probe = [&](const FieldGrid& u, int i, int j) {
    const SubdomainWindow& s = part.sub(i, j);
    return u.at((s.cx0 + s.cx1) / 2, (s.cy0 + s.cy1) / 2);
  };
  for (int s = 1; s <= 3; ++s) {
    DdmStats st;
    const FieldGrid u = eng.solve_iterative(f, 0.0, s, st);
    CHECK(st.steps == s);
    for (int j = 0; j < 4; ++j)
      for (int i = 0; i < 4; ++i) {
        CAPTURE(s);
        CAPTURE(i);
        CAPTURE(j);
        // Edge hops cost one sweep, corner hops two: reach is the taxicab
        // distance from the source window at (0,0).
        if (i + j >= s)
          CHECK(probe(u, i, j) == Complex(0));
        else
          CHECK(std::abs(probe(u, i, j)) > 0);
      }
    if (s == 1) CHECK(st.skipped > 0);
  }
}

TEST_CASE("congruent windows share factorization classes") {
  // 2x2 windows are mirror images of each other, which permutes the
  // coefficient arrays, so every window is its own class.
  DdmEngine e22(make_cfg(80, 2, 2, 4.0, 10, 20));
  auto c22 = e22.class_info();
  CHECK(c22.size() == 4);
  for (const auto& c : c22) {
    CHECK(c.members == 1);
    CHECK(std::string(c.backend) == "ldlt");
    CHECK(c.probe_relres <= 1e-10);
  }

  DdmEngine e44(make_cfg(80, 4, 4, 4.0, 4, 8));
  auto c44 = e44.class_info();
  CHECK(c44.size() == 9);
  int members = 0;
  for (const auto& c : c44) members += c.members;
  CHECK(members == 16);
}

TEST_CASE("four-window split hits the direct solution") {
  DdmConfig cfg = make_cfg(80, 2, 2, 8.0, 10, 20);
  DdmEngine eng(cfg);
  const std::vector<Complex> f = point_source(eng, 0.5, 0.5);  // on both cuts

  DdmStats st4;
  eng.solve_iterative(f, 0.0, 4, st4);
  CHECK(st4.relres <= 1e-3);

  DdmStats st;
  const FieldGrid u = eng.solve_iterative(f, 1e-8, 25, st);
  REQUIRE(st.converged);
  CHECK(st.relres <= 1e-8);
  const FieldGrid ud = direct_solve_global(cfg.grid, cfg.medium, cfg.c_sigma, f);
  CHECK(rel_l2(u.v, ud.v) <= 1e-6);
  CHECK(st.history.back().step == st.steps);
}

TEST_CASE("huge tolerance stops after the first sweep") {
  DdmEngine eng(make_cfg(40, 2, 2, 4.0, 4, 8));
  const std::vector<Complex> f = point_source(eng, 0.3, 0.6);
  DdmStats st;
  eng.solve_iterative(f, 1e300, 10, st);
  CHECK(st.converged);
  CHECK(st.steps == 1);
}

TEST_CASE("sparse residual checks still record the final step") {
  DdmEngine eng(make_cfg(40, 2, 2, 4.0, 4, 8));
  const std::vector<Complex> f = point_source(eng, 0.3, 0.6);
  DdmStats st;
  eng.solve_iterative(f, 0.0, 5, st, 2);
  CHECK(st.steps == 5);
  REQUIRE(!st.history.empty());
  CHECK(st.history.back().step == 5);
  for (const StepRecord& r : st.history) CHECK((r.step % 2 == 0 || r.step == 5));
}

TEST_CASE("solver output is independent of the thread count") {
  DdmConfig cfg = make_cfg(80, 2, 2, 8.0, 10, 20);
  cfg.threads = 1;
  DdmEngine e1(cfg);
  cfg.threads = 3;
  DdmEngine e3(cfg);
  const std::vector<Complex> f = point_source(e1, 0.41, 0.63);
  DdmStats s1, s3;
  const FieldGrid u1 = e1.solve_iterative(f, 1e-8, 25, s1);
  const FieldGrid u3 = e3.solve_iterative(f, 1e-8, 25, s3);
  CHECK(s1.steps == s3.steps);
  CHECK(u1.v == u3.v);
}

TEST_CASE("global apply is the scaled assembled matrix") {
  DdmEngine eng(make_cfg(40, 2, 2, 4.0, 4, 8));
  const DiscreteOperator& op = eng.global_op();
  const size_t n = eng.n_global();
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> dist(-1, 1);
  std::vector<Complex> u(n), lu(n), au(n);
  const int nx = op.win.nx, ny = op.win.ny;
  // The assembled matrix drops couplings into the boundary ring, so the
  // comparison needs a field that vanishes there.
  for (int lq = 0; lq < ny; ++lq)
    for (int lp = 0; lp < nx; ++lp) {
      const bool ring = lp == 0 || lp == nx - 1 || lq == 0 || lq == ny - 1;
      u[size_t(lq) * nx + lp] = ring ? Complex(0) : Complex(dist(rng), dist(rng));
    }
  eng.apply_global(u.data(), lu.data());
  op.assemble().multiply(u.data(), au.data());
  for (int lq = 0; lq < ny; ++lq)
    for (int lp = 0; lp < nx; ++lp) {
      const size_t i = size_t(lq) * nx + lp;
      if (lp == 0 || lp == nx - 1 || lq == 0 || lq == ny - 1) {
        CHECK(lu[i] == u[i]);  // identity ring
      } else {
        const Complex scaled = op.jac(lp, lq) * lu[i];
        CHECK(std::abs(scaled - au[i]) <= 1e-12 * (std::abs(au[i]) + 1.0));
      }
    }
}

TEST_CASE("preconditioner basics") {
  DdmConfig cfg = make_cfg(80, 2, 2, 8.0, 10, 20);
  DdmEngine eng(cfg);
  const size_t n = eng.n_global();
  const int nx = eng.global_op().win.nx, ny = eng.global_op().win.ny;
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> dist(-1, 1);
  std::vector<Complex> r(n);
  for (int lq = 0; lq < ny; ++lq)
    for (int lp = 0; lp < nx; ++lp) {
      const bool ring = lp == 0 || lp == nx - 1 || lq == 0 || lq == ny - 1;
      r[size_t(lq) * nx + lp] = ring ? Complex(0) : Complex(dist(rng), dist(rng));
    }

  SUBCASE("zero in, zero out") {
    std::vector<Complex> z(n), zero(n, Complex(0));
    DdmStats st;
    eng.precondition(zero.data(), z.data(), 4, st);
    for (const Complex& v : z) CHECK(v == Complex(0));
  }

  SUBCASE("power-of-two scaling is exact") {
    std::vector<Complex> z1(n), z2(n), r2(n);
    for (size_t i = 0; i < n; ++i) r2[i] = 2.0 * r[i];
    DdmStats st;
    eng.precondition(r.data(), z1.data(), 3, st);
    eng.precondition(r2.data(), z2.data(), 3, st);
    for (size_t i = 0; i < n; ++i) REQUIRE(z2[i] == 2.0 * z1[i]);
  }

  SUBCASE("general scaling within roundoff") {
    const Complex alpha(0.3, -0.7);
    std::vector<Complex> z1(n), z2(n), r2(n);
    for (size_t i = 0; i < n; ++i) r2[i] = alpha * r[i];
    DdmStats st;
    eng.precondition(r.data(), z1.data(), 3, st);
    eng.precondition(r2.data(), z2.data(), 3, st);
    double scale = 0;
    for (size_t i = 0; i < n; ++i) scale = std::max(scale, std::abs(z1[i]));
    for (size_t i = 0; i < n; ++i)
      CHECK(std::abs(z2[i] - alpha * z1[i]) <= 1e-12 * scale);
  }

  SUBCASE("enough sweeps act like a solve") {
    std::vector<Complex> z(n), az(n);
    DdmStats st;
    eng.precondition(r.data(), z.data(), 8, st);
    CHECK(st.solves > 0);
    CHECK(st.solves <= 8 * 4);
    eng.apply_global(z.data(), az.data());
    CHECK(rel_l2(az, r) <= 1e-2);
  }
}
