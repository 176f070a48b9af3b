#include <doctest.h>

#include <cmath>
#include <random>

#include "helmddm/discretize.hpp"
#include "helmddm/pml.hpp"

using namespace helmddm;

namespace {

struct Setup {
  GridSpec g;
  MediumModel med;
  double sigma0;
};

Setup make_setup(int mx, int my, int n1, int n2, double omega, double h) {
  Setup s;
  s.g.x0 = 0;
  s.g.y0 = 0;
  s.g.h = h;
  s.g.mx = mx;
  s.g.my = my;
  s.g.n1 = n1;
  s.g.n2 = n2;
  s.med.kind = MediumKind::Constant;
  s.med.omega = omega;
  s.med.velocity = 1.0;
  s.med.interior = s.g.interior_box();
  s.med.margin = (s.g.n_ext() + 1) * h;
  s.sigma0 = default_sigma0(25.0, s.med.k_min(), s.g.n_ramp * h);
  return s;
}

Complex rand_c(std::mt19937& rng) {
  std::uniform_real_distribution<double> d(-1, 1);
  return {d(rng), d(rng)};
}

}  // namespace

TEST_CASE("unstretched stencil is the 5-point Laplacian plus k^2") {
  Setup s = make_setup(40, 40, 1, 1, 8.0, 0.025);
  const DiscreteOperator op =
      build_operator(s.g, s.g.global_window(), global_layout(s.g), s.med, s.sigma0);
  const double ih2 = 1.0 / (s.g.h * s.g.h);
  const double k2 = 64.0;

  // Probe the row at a deep-interior node by applying to unit vectors.
  const int p = s.g.nodes_x() / 2, q = s.g.nodes_y() / 2;
  FieldGrid u(s.g.global_window(), s.g.h);
  std::vector<Complex> out(u.v.size());
  auto row_coeff = [&](int dp, int dq) {
    u.fill_zero();
    u.at(p + dp, q + dq) = 1;
    op.apply(u.v.data(), out.data());
    return out[u.idx(p, q)];
  };
  CHECK(row_coeff(0, 0) == Complex(-4 * ih2 + k2, 0));
  CHECK(row_coeff(1, 0) == Complex(ih2, 0));
  CHECK(row_coeff(-1, 0) == Complex(ih2, 0));
  CHECK(row_coeff(0, 1) == Complex(ih2, 0));
  CHECK(row_coeff(0, -1) == Complex(ih2, 0));
}

TEST_CASE("constant field maps to k^2 where nothing is stretched") {
  Setup s = make_setup(40, 40, 1, 1, 8.0, 0.025);
  const DiscreteOperator op =
      build_operator(s.g, s.g.global_window(), global_layout(s.g), s.med, s.sigma0);
  FieldGrid u(s.g.global_window(), s.g.h);
  std::fill(u.v.begin(), u.v.end(), Complex(1, 0));
  std::vector<Complex> out(u.v.size());
  op.apply(u.v.data(), out.data());
  const int e = s.g.n_ext();
  for (int q = e + 2; q <= e + s.g.my - 2; q += 7)
    for (int p = e + 2; p <= e + s.g.mx - 2; p += 7)
      CHECK(std::abs(out[u.idx(p, q)] - Complex(64.0, 0)) < 1e-12);
}

TEST_CASE("plane wave reproduces the 5-point symbol") {
  Setup s = make_setup(64, 64, 1, 1, 10.0, 1.0 / 64);
  const DiscreteOperator op =
      build_operator(s.g, s.g.global_window(), global_layout(s.g), s.med, s.sigma0);
  const double k = 10.0, h = s.g.h;
  const Lattice lat = s.g.lattice();
  FieldGrid u(s.g.global_window(), h);
  for (int q = 0; q < u.win.ny; ++q)
    for (int p = 0; p < u.win.nx; ++p)
      u.v[size_t(q) * u.win.nx + p] = std::exp(Complex(0, k * lat.x(p)));
  std::vector<Complex> out(u.v.size());
  op.apply(u.v.data(), out.data());
  const double symbol = (2 * std::cos(k * h) - 2) / (h * h) + k * k;
  const int e = s.g.n_ext();
  for (int q = e + 3; q <= e + 61; q += 11)
    for (int p = e + 3; p <= e + 61; p += 11) {
      const Complex expect = symbol * u.at(p, q);
      CHECK(std::abs(out[u.idx(p, q)] - expect) < 1e-9);
    }
}

TEST_CASE("operator consistency is second order") {
  // Apply the operator to a fixed smooth function on three dyadic meshes and
  // compare values at shared physical nodes; successive differences must
  // shrink by about 4 per refinement, including inside the absorber.
  auto f = [](double x, double y) {
    return std::exp(Complex(0, 31.0 * x + 17.0 * y)) * (2.0 + std::sin(3 * x) * std::cos(2 * y));
  };
  std::vector<std::vector<Complex>> vals;  // per level, probes
  for (int lev = 0; lev < 3; ++lev) {
    const int f_ref = 1 << lev;
    Setup s = make_setup(32 * f_ref, 32 * f_ref, 1, 1, 12.0, 0.02 / f_ref);
    GridSpec& g = s.g;
    g.n_overlap = 10 * f_ref;
    g.n_ramp = 20 * f_ref;
    s.med.margin = (g.n_ext() + 1) * g.h;
    s.sigma0 = default_sigma0(25.0, s.med.k_min(), g.n_ramp * g.h);
    const DiscreteOperator op =
        build_operator(g, g.global_window(), global_layout(g), s.med, s.sigma0);
    const Lattice lat = g.lattice();
    FieldGrid u(g.global_window(), g.h);
    for (int q = 0; q < u.win.ny; ++q)
      for (int p = 0; p < u.win.nx; ++p)
        u.v[size_t(q) * u.win.nx + p] = f(lat.x(p), lat.y(q));
    std::vector<Complex> out(u.v.size());
    op.apply(u.v.data(), out.data());
    // Probe nodes fixed in physical space: some interior, some in the ramp.
    std::vector<Complex> probes;
    const int e0 = 30;  // level-0 extension
    for (int pq : {e0 + 4, e0 + 16, e0 + 29, e0 + 32 + 8, 12, 5})
      probes.push_back(out[u.idx(pq * f_ref, (e0 + 10) * f_ref)]);
    vals.push_back(probes);
  }
  for (size_t i = 0; i < vals[0].size(); ++i) {
    const double d01 = std::abs(vals[0][i] - vals[1][i]);
    const double d12 = std::abs(vals[1][i] - vals[2][i]);
    if (d01 < 1e-10) continue;  // already converged
    const double rate = std::log2(d01 / d12);
    CHECK(rate > 1.8);
    CHECK(rate < 2.35);
  }
}

TEST_CASE("assembled matrix is symmetric bit for bit") {
  Setup s = make_setup(60, 40, 2, 2, 9.0, 1.0 / 60);
  const Partition part = build_partition(s.g);
  const SubdomainWindow& sub = part.sub(1, 0);
  const DiscreteOperator op =
      build_operator(s.g, sub.win, layout_for(sub), s.med, s.sigma0);
  const SparseMatrix A = op.assemble();
  // Gather the transpose triplets and compare value-for-value.
  std::vector<std::vector<std::pair<int, Complex>>> at(A.n);
  for (int r = 0; r < A.n; ++r)
    for (int k = A.row_ptr[r]; k < A.row_ptr[r + 1]; ++k)
      at[A.col[k]].push_back({r, A.val[k]});
  for (int r = 0; r < A.n; ++r) {
    const int nr = A.row_ptr[r + 1] - A.row_ptr[r];
    REQUIRE(int(at[r].size()) == nr);
    for (int k = A.row_ptr[r]; k < A.row_ptr[r + 1]; ++k) {
      const auto& tr = at[r][k - A.row_ptr[r]];
      CHECK(tr.first == A.col[k]);
      CHECK(tr.second == A.val[k]);
    }
  }
}

TEST_CASE("rows away from any absorber carry no imaginary part") {
  Setup s = make_setup(48, 48, 2, 1, 7.0, 1.0 / 48);
  const Partition part = build_partition(s.g);
  const SubdomainWindow& sub = part.sub(0, 0);
  const DiscreteOperator op =
      build_operator(s.g, sub.win, layout_for(sub), s.med, s.sigma0);
  // Core nodes at least one node from the stretches: coefficients real.
  for (int lp = sub.cx0 - sub.win.x0; lp <= sub.cx1 - sub.win.x0 - s.g.n_overlap; ++lp) {
    CHECK(op.a1_node[lp].imag() == 0.0);
    CHECK(op.inv_a1_half[lp].imag() == 0.0);
  }
}

TEST_CASE("apply is the identity on the boundary ring") {
  Setup s = make_setup(32, 32, 1, 1, 5.0, 1.0 / 32);
  const DiscreteOperator op =
      build_operator(s.g, s.g.global_window(), global_layout(s.g), s.med, s.sigma0);
  std::mt19937 rng(7);
  FieldGrid u(s.g.global_window(), s.g.h);
  for (Complex& v : u.v) v = rand_c(rng);
  std::vector<Complex> out(u.v.size());
  op.apply(u.v.data(), out.data());
  const int nx = u.win.nx, ny = u.win.ny;
  for (int p = 0; p < nx; ++p) {
    CHECK(out[size_t(0) * nx + p] == u.v[size_t(0) * nx + p]);
    CHECK(out[size_t(ny - 1) * nx + p] == u.v[size_t(ny - 1) * nx + p]);
  }
  for (int q = 0; q < ny; ++q) {
    CHECK(out[size_t(q) * nx + 0] == u.v[size_t(q) * nx + 0]);
    CHECK(out[size_t(q) * nx + nx - 1] == u.v[size_t(q) * nx + nx - 1]);
  }
}

TEST_CASE("apply is linear") {
  Setup s = make_setup(24, 24, 1, 1, 6.0, 1.0 / 24);
  const DiscreteOperator op =
      build_operator(s.g, s.g.global_window(), global_layout(s.g), s.med, s.sigma0);
  std::mt19937 rng(11);
  const size_t n = size_t(s.g.nodes_x()) * s.g.nodes_y();
  std::vector<Complex> u(n), v(n), w(n), au(n), av(n), aw(n);
  for (size_t i = 0; i < n; ++i) {
    u[i] = rand_c(rng);
    v[i] = rand_c(rng);
  }
  const Complex a(0.7, -0.3), b(-1.1, 0.2);
  for (size_t i = 0; i < n; ++i) w[i] = a * u[i] + b * v[i];
  op.apply(u.data(), au.data());
  op.apply(v.data(), av.data());
  op.apply(w.data(), aw.data());
  const double ulp = std::numeric_limits<double>::epsilon();
  for (size_t i = 0; i < n; ++i) {
    const Complex lhs = aw[i], rhs = a * au[i] + b * av[i];
    const double scale = std::abs(a) * std::abs(au[i]) + std::abs(b) * std::abs(av[i]);
    CHECK(std::abs(lhs - rhs) <= 8 * ulp * (scale + 1.0));
  }
}

TEST_CASE("congruent interior subdomains share coefficient arrays") {
  Setup s = make_setup(120, 40, 4, 1, 9.0, 1.0 / 120);
  const Partition part = build_partition(s.g);
  const SubdomainWindow& a = part.sub(1, 0);
  const SubdomainWindow& b = part.sub(2, 0);
  const DiscreteOperator oa = build_operator(s.g, a.win, layout_for(a), s.med, s.sigma0);
  const DiscreteOperator ob = build_operator(s.g, b.win, layout_for(b), s.med, s.sigma0);
  CHECK(oa.a1_node == ob.a1_node);
  CHECK(oa.inv_a1_half == ob.inv_a1_half);
  CHECK(oa.a2_node == ob.a2_node);
  CHECK(oa.inv_a2_half == ob.inv_a2_half);
  CHECK(oa.k2 == ob.k2);
}

TEST_CASE("degenerate partition: subdomain operator equals the global one") {
  Setup s = make_setup(36, 36, 1, 1, 6.0, 1.0 / 36);
  s.g.n_overlap = 0;
  s.med.margin = (s.g.n_ext() + 1) * s.g.h;
  const Partition part = build_partition(s.g);
  const SubdomainWindow& sub = part.subs[0];
  const DiscreteOperator os =
      build_operator(s.g, sub.win, layout_for(sub), s.med, s.sigma0);
  const DiscreteOperator og =
      build_operator(s.g, s.g.global_window(), global_layout(s.g), s.med, s.sigma0);
  CHECK(os.a1_node == og.a1_node);
  CHECK(os.inv_a1_half == og.inv_a1_half);
  CHECK(os.a2_node == og.a2_node);
  CHECK(os.inv_a2_half == og.inv_a2_half);
  CHECK(os.k2 == og.k2);
  const SparseMatrix As = os.assemble(), Ag = og.assemble();
  CHECK(As.row_ptr == Ag.row_ptr);
  CHECK(As.col == Ag.col);
  CHECK(As.val == Ag.val);
}

TEST_CASE("scale_rhs weights interior rows by the jacobian and zeroes the ring") {
  Setup s = make_setup(20, 20, 1, 1, 4.0, 0.05);
  const DiscreteOperator op =
      build_operator(s.g, s.g.global_window(), global_layout(s.g), s.med, s.sigma0);
  const size_t n = size_t(s.g.nodes_x()) * s.g.nodes_y();
  std::vector<Complex> f(n, Complex(1, 0)), b(n);
  op.scale_rhs(f.data(), b.data());
  const int nx = s.g.nodes_x();
  CHECK(b[0] == Complex(0));
  CHECK(b[nx - 1] == Complex(0));
  const int e = s.g.n_ext();
  const int pj = e + 10, qj = e + 10;
  CHECK(b[size_t(qj) * nx + pj] == op.jac(pj, qj));
  const int pr = 5, qr = e + 10;  // inside the left absorber: |J| > 1
  CHECK(std::abs(b[size_t(qr) * nx + pr]) > 1.0);
}
