#include "helmddm/krylov.hpp"

#include <chrono>
#include <cmath>

namespace helmddm {

namespace {

double nrm2(const std::vector<Complex>& v) {
  double s = 0;
  for (const Complex& c : v) s += std::norm(c);
  return std::sqrt(s);
}

Complex dot(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  Complex s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

}  // namespace

FgmresResult fgmres(size_t n, const LinearOp& A, const LinearOp& M,
                    const std::vector<Complex>& b, std::vector<Complex>& x,
                    const FgmresOptions& opt) {
  FgmresResult res;
  x.assign(n, Complex(0));
  const double bnorm = nrm2(b);
  if (bnorm == 0) {
    res.converged = true;
    res.relres = res.true_relres = 0;
    return res;
  }
  std::vector<Complex> r = b;  // residual at x = 0
  int total = 0;
  bool stop = false;
  while (!stop && total < opt.max_iters) {
    const int m = opt.restart > 0 ? std::min(opt.restart, opt.max_iters - total)
                                  : opt.max_iters - total;
    const double rnorm = nrm2(r);
    if (rnorm == 0) {
      res.converged = true;
      break;
    }
    std::vector<std::vector<Complex>> V, Z, H;
    std::vector<Complex> g(size_t(m) + 1, Complex(0)), sn(m);
    std::vector<double> cs(m);
    V.emplace_back(r);
    for (Complex& c : V[0]) c /= rnorm;
    g[0] = rnorm;
    int k = 0;  // usable columns this cycle
    for (int j = 0; j < m; ++j) {
      const auto it0 = std::chrono::steady_clock::now();
      Z.emplace_back(n);
      if (M)
        M(V[j].data(), Z[j].data());
      else
        Z[j] = V[j];
      std::vector<Complex> w(n);
      A(Z[j].data(), w.data());
      H.emplace_back(size_t(j) + 2, Complex(0));
      for (int i = 0; i <= j; ++i) {
        const Complex hij = dot(V[i], w);
        H[j][i] = hij;
        for (size_t t = 0; t < n; ++t) w[t] -= hij * V[i][t];
      }
      const double hlast = nrm2(w);
      H[j][j + 1] = hlast;
      for (int i = 0; i < j; ++i) {
        const Complex a = H[j][i], c = H[j][i + 1];
        H[j][i] = cs[i] * a + sn[i] * c;
        H[j][i + 1] = -std::conj(sn[i]) * a + cs[i] * c;
      }
      const Complex a = H[j][j], c = H[j][j + 1];
      const double t = std::sqrt(std::norm(a) + std::norm(c));
      if (t == 0) {  // dead column; drop it and stop flagged
        stop = true;
        break;
      }
      if (a == Complex(0)) {
        cs[j] = 0;
        sn[j] = std::conj(c) / std::abs(c);
      } else {
        cs[j] = std::abs(a) / t;
        sn[j] = (a / std::abs(a)) * std::conj(c) / t;
      }
      H[j][j] = cs[j] * a + sn[j] * c;
      H[j][j + 1] = 0;
      g[j + 1] = -std::conj(sn[j]) * g[j];
      g[j] = cs[j] * g[j];
      ++total;
      k = j + 1;
      res.relres = std::abs(g[j + 1]) / bnorm;
      res.history.push_back(res.relres);
      res.iter_ms.push_back(std::chrono::duration<double, std::milli>(
                                std::chrono::steady_clock::now() - it0)
                                .count());
      if (res.relres <= opt.tol) {
        res.converged = true;
        stop = true;
        break;
      }
      if (hlast == 0) {  // invariant subspace reached; nothing left to add
        stop = true;
        break;
      }
      V.emplace_back(std::move(w));
      for (Complex& cv : V[j + 1]) cv /= hlast;
    }
    if (k > 0) {
      std::vector<Complex> y(k);
      for (int i = k - 1; i >= 0; --i) {
        Complex s = g[i];
        for (int l = i + 1; l < k; ++l) s -= H[l][i] * y[l];
        y[i] = s / H[i][i];
      }
      for (int l = 0; l < k; ++l)
        for (size_t t = 0; t < n; ++t) x[t] += y[l] * Z[l][t];
    }
    if (!stop) {  // restart: recompute the residual explicitly
      A(x.data(), r.data());
      for (size_t t = 0; t < n; ++t) r[t] = b[t] - r[t];
    }
  }
  res.iters = total;
  std::vector<Complex> ax(n);
  A(x.data(), ax.data());
  double s = 0;
  for (size_t t = 0; t < n; ++t) s += std::norm(b[t] - ax[t]);
  res.true_relres = std::sqrt(s) / bnorm;
  return res;
}

}  // namespace helmddm
