#include "helmddm/sparse.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <cmath>
#include <cstdint>

namespace helmddm {

void SparseMatrix::multiply(const Complex* x, Complex* y) const {
  for (int r = 0; r < n; ++r) {
    Complex s = 0;
    for (int p = row_ptr[r]; p < row_ptr[r + 1]; ++p) s += val[p] * x[col[p]];
    y[r] = s;
  }
}

namespace {

void nd_rec(int x0, int y0, int w, int h, int nx, std::vector<int>& out) {
  if (w <= 0 || h <= 0) return;
  if (w <= 6 && h <= 6) {
    for (int q = y0; q < y0 + h; ++q)
      for (int p = x0; p < x0 + w; ++p) out.push_back(q * nx + p);
    return;
  }
  if (w >= h) {
    const int mid = x0 + w / 2;
    nd_rec(x0, y0, mid - x0, h, nx, out);
    nd_rec(mid + 1, y0, x0 + w - mid - 1, h, nx, out);
    for (int q = y0; q < y0 + h; ++q) out.push_back(q * nx + mid);
  } else {
    const int mid = y0 + h / 2;
    nd_rec(x0, y0, w, mid - y0, nx, out);
    nd_rec(x0, mid + 1, w, y0 + h - mid - 1, nx, out);
    for (int p = x0; p < x0 + w; ++p) out.push_back(mid * nx + p);
  }
}

}  // namespace

std::vector<int> grid_nd_order(int nx, int ny) {
  std::vector<int> order;
  order.reserve(size_t(nx) * ny);
  if (nx <= 2 || ny <= 2) {
    for (int k = 0; k < nx * ny; ++k) order.push_back(k);
    return order;
  }
  for (int p = 0; p < nx; ++p) order.push_back(p);
  for (int q = 1; q < ny - 1; ++q) {
    order.push_back(q * nx);
    order.push_back(q * nx + nx - 1);
  }
  for (int p = 0; p < nx; ++p) order.push_back((ny - 1) * nx + p);
  nd_rec(1, 1, nx - 2, ny - 2, nx, order);
  return order;
}

// Up-looking LDL^T of the permuted matrix, unconjugated transpose, no
// pivoting. Stores strictly-lower L columns plus the diagonal D.
struct LdltData {
  int n = 0;
  std::vector<int> perm, pinv;       // perm[new] = old
  std::vector<int> Lp, Li, Lnz, parent;
  std::vector<Complex> Lx, D;
};

struct EigenLuData {
  Eigen::SparseMatrix<Complex> mat;
  Eigen::SparseLU<Eigen::SparseMatrix<Complex>, Eigen::COLAMDOrdering<int>> lu;
};

namespace {

// Upper-triangular part (row <= col) of P A P^T in CSC form.
struct UpperCsc {
  std::vector<int> Bp, Bi;
  std::vector<Complex> Bx;
};

UpperCsc build_upper(const SparseMatrix& A, const std::vector<int>& pinv) {
  const int n = A.n;
  UpperCsc B;
  B.Bp.assign(n + 1, 0);
  for (int r = 0; r < n; ++r) {
    const int rn = pinv[r];
    for (int p = A.row_ptr[r]; p < A.row_ptr[r + 1]; ++p) {
      const int cn = pinv[A.col[p]];
      if (rn <= cn) ++B.Bp[cn + 1];
    }
  }
  for (int k = 0; k < n; ++k) B.Bp[k + 1] += B.Bp[k];
  B.Bi.resize(B.Bp[n]);
  B.Bx.resize(B.Bp[n]);
  std::vector<int> next(B.Bp.begin(), B.Bp.end() - 1);
  for (int r = 0; r < n; ++r) {
    const int rn = pinv[r];
    for (int p = A.row_ptr[r]; p < A.row_ptr[r + 1]; ++p) {
      const int cn = pinv[A.col[p]];
      if (rn <= cn) {
        const int q = next[cn]++;
        B.Bi[q] = rn;
        B.Bx[q] = A.val[p];
      }
    }
  }
  return B;
}

std::unique_ptr<LdltData> factor_ldlt(const SparseMatrix& A,
                                      const std::vector<int>& order) {
  const int n = A.n;
  auto F = std::make_unique<LdltData>();
  F->n = n;
  F->perm = order;
  F->pinv.resize(n);
  for (int k = 0; k < n; ++k) F->pinv[order[k]] = k;
  const UpperCsc B = build_upper(A, F->pinv);

  F->parent.assign(n, -1);
  F->Lnz.assign(n, 0);
  std::vector<int> flag(n, -1);
  for (int k = 0; k < n; ++k) {
    flag[k] = k;
    for (int p = B.Bp[k]; p < B.Bp[k + 1]; ++p) {
      int i = B.Bi[p];
      if (i >= k) continue;
      for (; flag[i] != k; i = F->parent[i]) {
        if (F->parent[i] == -1) F->parent[i] = k;
        ++F->Lnz[i];
        flag[i] = k;
      }
    }
  }
  F->Lp.assign(n + 1, 0);
  for (int k = 0; k < n; ++k) F->Lp[k + 1] = F->Lp[k] + F->Lnz[k];
  F->Li.resize(F->Lp[n]);
  F->Lx.resize(F->Lp[n]);
  F->D.resize(n);

  std::vector<Complex> y(n, Complex(0));
  std::vector<int> pattern(n), lnz(n, 0);
  std::fill(flag.begin(), flag.end(), -1);
  for (int k = 0; k < n; ++k) {
    int top = n;
    flag[k] = k;
    for (int p = B.Bp[k]; p < B.Bp[k + 1]; ++p) {
      int i = B.Bi[p];
      y[i] += B.Bx[p];
      int len = 0;
      for (; flag[i] != k; i = F->parent[i]) {
        pattern[len++] = i;
        flag[i] = k;
      }
      while (len > 0) pattern[--top] = pattern[--len];
    }
    F->D[k] = y[k];
    y[k] = 0;
    for (; top < n; ++top) {
      const int i = pattern[top];
      const Complex yi = y[i];
      y[i] = 0;
      const int p2 = F->Lp[i] + lnz[i];
      for (int p = F->Lp[i]; p < p2; ++p) y[F->Li[p]] -= F->Lx[p] * yi;
      const Complex lki = yi / F->D[i];
      F->D[k] -= lki * yi;
      F->Li[p2] = k;
      F->Lx[p2] = lki;
      ++lnz[i];
    }
    if (F->D[k] == Complex(0)) return nullptr;
  }
  return F;
}

double norm2(const Complex* v, int n) {
  double s = 0;
  for (int i = 0; i < n; ++i) s += std::norm(v[i]);
  return std::sqrt(s);
}

}  // namespace

Factorization::Factorization() = default;
Factorization::~Factorization() = default;

void Factorization::build_eigen() {
  lu_ = std::make_unique<EigenLuData>();
  std::vector<Eigen::Triplet<Complex>> trips;
  trips.reserve(A_.nnz());
  for (int r = 0; r < A_.n; ++r)
    for (int p = A_.row_ptr[r]; p < A_.row_ptr[r + 1]; ++p)
      trips.emplace_back(r, A_.col[p], A_.val[p]);
  lu_->mat.resize(A_.n, A_.n);
  lu_->mat.setFromTriplets(trips.begin(), trips.end());
  lu_->mat.makeCompressed();
  lu_->lu.analyzePattern(lu_->mat);
  lu_->lu.factorize(lu_->mat);
  if (lu_->lu.info() != Eigen::Success)
    throw SolveError("sparse factorization failed");
}

void Factorization::factor(SparseMatrix A, std::vector<int> order) {
  A_ = std::move(A);
  ldlt_.reset();
  lu_.reset();
  const int n = A_.n;
  work_.assign(n, Complex(0));
  resid_.assign(n, Complex(0));
  corr_.assign(n, Complex(0));
  if (!order.empty()) {
    if (int(order.size()) != n)
      throw SolveError("elimination order size mismatch");
    ldlt_ = factor_ldlt(A_, order);
  }
  // Probe with a fixed pseudo-random right-hand side; an inaccurate LDL^T
  // (element growth without pivoting) gets replaced by the LU backend.
  std::vector<Complex> b(n), x(n);
  uint64_t s = 0x9E3779B97F4A7C15ull;
  auto next = [&s] {
    s = s * 6364136223846793005ull + 1442695040888963407ull;
    return double(s >> 11) * 0x1.0p-52 - 1.0;
  };
  for (int i = 0; i < n; ++i) {
    const double re = next();
    b[i] = Complex(re, next());
  }
  if (ldlt_) {
    probe_relres_ = refine(b.data(), x.data());
    if (!(probe_relres_ <= 1e-10)) ldlt_.reset();
  }
  if (!ldlt_) {
    build_eigen();
    probe_relres_ = refine(b.data(), x.data());
  }
}

size_t Factorization::factor_nonzeros() const {
  if (ldlt_) return size_t(ldlt_->Lp[ldlt_->n]) + ldlt_->n;
  if (lu_) return size_t(lu_->lu.nnzL()) + size_t(lu_->lu.nnzU());
  return 0;
}

void Factorization::solve_raw(const Complex* b, Complex* x) const {
  const int n = A_.n;
  if (ldlt_) {
    const LdltData& F = *ldlt_;
    Complex* y = work_.data();
    for (int k = 0; k < n; ++k) y[k] = b[F.perm[k]];
    for (int k = 0; k < n; ++k) {
      const Complex yk = y[k];
      for (int p = F.Lp[k]; p < F.Lp[k + 1]; ++p) y[F.Li[p]] -= F.Lx[p] * yk;
    }
    for (int k = 0; k < n; ++k) y[k] /= F.D[k];
    for (int k = n - 1; k >= 0; --k) {
      Complex s = y[k];
      for (int p = F.Lp[k]; p < F.Lp[k + 1]; ++p) s -= F.Lx[p] * y[F.Li[p]];
      y[k] = s;
    }
    for (int k = 0; k < n; ++k) x[F.perm[k]] = y[k];
  } else {
    Eigen::Map<const Eigen::VectorXcd> bm(b, n);
    Eigen::Map<Eigen::VectorXcd> xm(x, n);
    xm = lu_->lu.solve(bm);
  }
}

double Factorization::refine(const Complex* b, Complex* x) const {
  const int n = A_.n;
  const double bn = norm2(b, n);
  if (bn == 0) {
    std::fill(x, x + n, Complex(0));
    return 0;
  }
  solve_raw(b, x);
  double rel = -1;
  for (int it = 0; it < 12; ++it) {
    A_.multiply(x, resid_.data());
    for (int i = 0; i < n; ++i) resid_[i] = b[i] - resid_[i];
    const double r = norm2(resid_.data(), n) / bn;
    if (rel >= 0 && r >= 0.5 * rel) {
      if (r > rel)  // last correction hurt; undo it
        for (int i = 0; i < n; ++i) x[i] -= corr_[i];
      return std::min(r, rel);
    }
    rel = r;
    if (rel <= 1e-11) return rel;
    solve_raw(resid_.data(), corr_.data());
    for (int i = 0; i < n; ++i) x[i] += corr_[i];
  }
  return rel;
}

void Factorization::solve(const Complex* b, Complex* x) const {
  std::lock_guard<std::mutex> lock(mu_);
  refine(b, x);
}

void Factorization::solve(const std::vector<Complex>& b,
                          std::vector<Complex>& x) const {
  x.resize(b.size());
  solve(b.data(), x.data());
}

}  // namespace helmddm
