#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "helmddm/discretize.hpp"
#include "helmddm/pml.hpp"
#include "helmddm/sparse.hpp"

using namespace helmddm;

namespace {

SparseMatrix from_triplets(int n, std::vector<std::array<int, 2>> pos,
                           std::vector<Complex> vals) {
  SparseMatrix A;
  A.n = n;
  A.row_ptr.assign(n + 1, 0);
  std::vector<std::pair<std::pair<int, int>, Complex>> t;
  for (size_t i = 0; i < pos.size(); ++i)
    t.push_back({{pos[i][0], pos[i][1]}, vals[i]});
  std::sort(t.begin(), t.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (const auto& e : t) ++A.row_ptr[e.first.first + 1];
  for (int r = 0; r < n; ++r) A.row_ptr[r + 1] += A.row_ptr[r];
  for (const auto& e : t) {
    A.col.push_back(e.first.second);
    A.val.push_back(e.second);
  }
  return A;
}

double rel_residual(const SparseMatrix& A, const std::vector<Complex>& x,
                    const std::vector<Complex>& b) {
  std::vector<Complex> r(b.size());
  A.multiply(x.data(), r.data());
  double nr = 0, nb = 0;
  for (size_t i = 0; i < b.size(); ++i) {
    nr += std::norm(r[i] - b[i]);
    nb += std::norm(b[i]);
  }
  return std::sqrt(nr / nb);
}

std::vector<Complex> random_vec(size_t n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> d(-1, 1);
  std::vector<Complex> v(n);
  for (Complex& c : v) c = {d(rng), d(rng)};
  return v;
}

DiscreteOperator window_operator(int mx, double omega) {
  GridSpec g;
  g.h = 1.0 / mx;
  g.mx = mx;
  g.my = mx;
  MediumModel med;
  med.kind = MediumKind::Constant;
  med.omega = omega;
  med.velocity = 1;
  med.interior = g.interior_box();
  med.margin = (g.n_ext() + 1) * g.h;
  const double s0 = default_sigma0(25.0, med.k_min(), g.n_ramp * g.h);
  return build_operator(g, g.global_window(), global_layout(g), med, s0);
}

}  // namespace

TEST_CASE("identity system") {
  SparseMatrix A = from_triplets(3, {{0, 0}, {1, 1}, {2, 2}},
                                 {Complex(1), Complex(1), Complex(1)});
  Factorization F;
  F.factor(A, grid_nd_order(3, 1));
  std::vector<Complex> b{{1, 2}, {3, -1}, {0, 5}}, x;
  F.solve(b, x);
  for (int i = 0; i < 3; ++i) CHECK(std::abs(x[i] - b[i]) < 1e-15);
}

TEST_CASE("off-diagonal permutation matrix needs pivoting") {
  SparseMatrix A =
      from_triplets(2, {{0, 1}, {1, 0}}, {Complex(1), Complex(1)});
  Factorization F;
  F.factor(A, {0, 1});  // zero diagonal defeats the symmetric path
  std::vector<Complex> b{{1, 0}, {2, 0}}, x;
  F.solve(b, x);
  CHECK(std::abs(x[0] - Complex(2, 0)) < 1e-14);
  CHECK(std::abs(x[1] - Complex(1, 0)) < 1e-14);
  CHECK(std::string(F.backend()) == "lu");
}

TEST_CASE("1d absorbing tridiagonal solves to machine accuracy") {
  // 50-point Helmholtz line with quadratic absorption ramps at both ends.
  const int n = 50;
  const double h = 1.0 / (n - 1), k = 12.0;
  std::vector<std::array<int, 2>> pos;
  std::vector<Complex> vals;
  auto alpha = [&](double x) {
    const double edge = 0.25;
    double t = 0;
    if (x < edge) t = (edge - x) / edge;
    if (x > 1 - edge) t = (x - (1 - edge)) / edge;
    return Complex(1, 4.0 * t * t);
  };
  for (int i = 0; i < n; ++i) {
    if (i == 0 || i == n - 1) {
      pos.push_back({i, i});
      vals.push_back(Complex(1));
      continue;
    }
    const Complex am = 1.0 / alpha((i - 0.5) * h), ap = 1.0 / alpha((i + 0.5) * h);
    // Couplings into the Dirichlet end rows are folded out to keep symmetry.
    if (i - 1 > 0) {
      pos.push_back({i, i - 1});
      vals.push_back(am / (h * h));
    }
    pos.push_back({i, i});
    vals.push_back(-(am + ap) / (h * h) + k * k * alpha(i * h));
    if (i + 1 < n - 1) {
      pos.push_back({i, i + 1});
      vals.push_back(ap / (h * h));
    }
  }
  SparseMatrix A = from_triplets(n, pos, vals);
  Factorization F;
  F.factor(A, grid_nd_order(n, 1));
  std::vector<Complex> b = random_vec(n, 3), x;
  b[0] = b[n - 1] = 0;
  F.solve(b, x);
  // Infinity-norm residual against the infinity norm of b.
  std::vector<Complex> r(n);
  A.multiply(x.data(), r.data());
  double num = 0, den = 0;
  for (int i = 0; i < n; ++i) {
    num = std::max(num, std::abs(r[i] - b[i]));
    den = std::max(den, std::abs(b[i]));
  }
  CHECK(num / den <= 1e-12);
}

TEST_CASE("grid ordering is a permutation") {
  for (auto [nx, ny] : {std::pair{7, 5}, {16, 16}, {33, 21}, {2, 2}}) {
    const std::vector<int> ord = grid_nd_order(nx, ny);
    REQUIRE(int(ord.size()) == nx * ny);
    std::vector<char> seen(ord.size(), 0);
    for (int v : ord) {
      REQUIRE(v >= 0);
      REQUIRE(v < nx * ny);
      CHECK(!seen[v]);
      seen[v] = 1;
    }
  }
}

TEST_CASE("absorbing-window operator solves below 1e-10") {
  const DiscreteOperator op = window_operator(40, 2 * M_PI * 7);
  const SparseMatrix A = op.assemble();
  Factorization F;
  F.factor(A, grid_nd_order(op.win.nx, op.win.ny));
  CHECK(std::string(F.backend()) == "ldlt");

  std::vector<Complex> b = random_vec(size_t(A.n), 17), x;
  F.solve(b, x);
  CHECK(rel_residual(A, x, b) <= 1e-10);

  SUBCASE("unit-vector consistency") {
    std::vector<Complex> ek(size_t(A.n), Complex(0)), bek(size_t(A.n)), xe;
    ek[size_t(A.n) / 2] = 1;
    A.multiply(ek.data(), bek.data());
    F.solve(bek, xe);
    double err = 0;
    for (size_t i = 0; i < ek.size(); ++i) err = std::max(err, std::abs(xe[i] - ek[i]));
    CHECK(err <= 1e-10);
  }

  SUBCASE("repeated solves are bitwise identical") {
    std::vector<Complex> x2;
    F.solve(b, x2);
    CHECK(x == x2);
  }

  SUBCASE("pivoting backend agrees") {
    Factorization G;
    G.factor(A, {});  // empty order selects the LU path
    CHECK(std::string(G.backend()) == "lu");
    std::vector<Complex> y;
    G.solve(b, y);
    double diff = 0, scale = 0;
    for (size_t i = 0; i < x.size(); ++i) {
      diff += std::norm(x[i] - y[i]);
      scale += std::norm(x[i]);
    }
    CHECK(std::sqrt(diff / scale) < 1e-9);
  }
}

TEST_CASE("zero right-hand side gives zero solution") {
  const DiscreteOperator op = window_operator(20, 2 * M_PI * 3);
  Factorization F;
  F.factor(op.assemble(), grid_nd_order(op.win.nx, op.win.ny));
  std::vector<Complex> b(size_t(op.win.size()), Complex(0)), x;
  F.solve(b, x);
  for (const Complex& v : x) CHECK(v == Complex(0));
}

TEST_CASE("factorization reports its fill") {
  const DiscreteOperator op = window_operator(24, 2 * M_PI * 4);
  const SparseMatrix A = op.assemble();
  Factorization F;
  F.factor(A, grid_nd_order(op.win.nx, op.win.ny));
  CHECK(F.factor_nonzeros() >= A.nnz() / 2);
  CHECK(F.probe_relres() <= 1e-10);
  CHECK(F.probe_relres() >= 0.0);
}
