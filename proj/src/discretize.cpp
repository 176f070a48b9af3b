#include "helmddm/discretize.hpp"

namespace helmddm {

PmlLayout layout_for(const SubdomainWindow& s) {
  return {s.cx0,          s.cx1,           s.cy0,
          s.cy1,          s.left_interior, s.right_interior,
          s.bottom_interior, s.top_interior};
}

PmlLayout global_layout(const GridSpec& g) {
  const int e = g.n_ext();
  return {e, e + g.mx, e, e + g.my, false, false, false, false};
}

namespace {

// Stretch factor 1 + i sigma at half-step index m along one axis. Distances
// are exact integer multiples of h/2 past the anchor core edges, so congruent
// windows sample identical values.
Complex alpha_axis(int m, int c0, int c1, bool lo_interior, bool hi_interior,
                   const GridSpec& g, double sigma0) {
  const double h2 = 0.5 * g.h;
  const double d = g.n_ramp * g.h;
  double sig = 0;
  const int dl = 2 * c0 - m;
  if (dl > 0) {
    const PmlProfile prof{sigma0, d, lo_interior ? g.n_overlap * g.h : 0.0};
    sig += shifted_sigma(prof, dl * h2);
  }
  const int dr = m - 2 * c1;
  if (dr > 0) {
    const PmlProfile prof{sigma0, d, hi_interior ? g.n_overlap * g.h : 0.0};
    sig += shifted_sigma(prof, dr * h2);
  }
  return Complex(1.0, sig);
}

}  // namespace

DiscreteOperator build_operator(const GridSpec& g, const GridWindow& win,
                                const PmlLayout& pml, const MediumModel& med,
                                double sigma0) {
  DiscreteOperator op;
  op.win = win;
  op.h = g.h;
  op.a1_node.resize(win.nx);
  op.inv_a1_half.resize(win.nx - 1);
  op.a2_node.resize(win.ny);
  op.inv_a2_half.resize(win.ny - 1);
  for (int lp = 0; lp < win.nx; ++lp) {
    const int m = 2 * (win.x0 + lp);
    op.a1_node[lp] = alpha_axis(m, pml.cx0, pml.cx1, pml.left_interior,
                                pml.right_interior, g, sigma0);
    if (lp + 1 < win.nx)
      op.inv_a1_half[lp] =
          1.0 / alpha_axis(m + 1, pml.cx0, pml.cx1, pml.left_interior,
                           pml.right_interior, g, sigma0);
  }
  for (int lq = 0; lq < win.ny; ++lq) {
    const int m = 2 * (win.y0 + lq);
    op.a2_node[lq] = alpha_axis(m, pml.cy0, pml.cy1, pml.bottom_interior,
                                pml.top_interior, g, sigma0);
    if (lq + 1 < win.ny)
      op.inv_a2_half[lq] =
          1.0 / alpha_axis(m + 1, pml.cy0, pml.cy1, pml.bottom_interior,
                           pml.top_interior, g, sigma0);
  }
  const Lattice lat = g.lattice();
  op.k2.resize(size_t(win.nx) * win.ny);
  for (int lq = 0; lq < win.ny; ++lq) {
    const double y = lat.y(win.y0 + lq);
    for (int lp = 0; lp < win.nx; ++lp) {
      const double k = eval_wavenumber(med, lat.x(win.x0 + lp), y);
      op.k2[size_t(lq) * win.nx + lp] = k * k;
    }
  }
  return op;
}

void DiscreteOperator::apply(const Complex* u, Complex* out) const {
  const int nx = win.nx, ny = win.ny;
  auto ref = [&](int lp, int lq) -> Complex {
    return u[size_t(lq) * nx + lp];
  };
  for (int lp = 0; lp < nx; ++lp) {
    out[lp] = u[lp];
    out[size_t(ny - 1) * nx + lp] = u[size_t(ny - 1) * nx + lp];
  }
  for (int lq = 1; lq < ny - 1; ++lq) {
    out[size_t(lq) * nx] = u[size_t(lq) * nx];
    out[size_t(lq) * nx + nx - 1] = u[size_t(lq) * nx + nx - 1];
    for (int lp = 1; lp < nx - 1; ++lp)
      out[size_t(lq) * nx + lp] = stencil(ref, lp, lq);
  }
}

SparseMatrix DiscreteOperator::assemble() const {
  const int nx = win.nx, ny = win.ny;
  const int n = nx * ny;
  const double ih2 = 1.0 / (h * h);
  SparseMatrix A;
  A.n = n;
  A.row_ptr.resize(n + 1);
  A.row_ptr[0] = 0;
  size_t nnz = 0;
  auto boundary = [&](int lp, int lq) {
    return lp == 0 || lp == nx - 1 || lq == 0 || lq == ny - 1;
  };
  for (int lq = 0; lq < ny; ++lq)
    for (int lp = 0; lp < nx; ++lp) {
      int c = 1;
      if (!boundary(lp, lq)) {
        c = 1;
        if (lq > 1) ++c;
        if (lp > 1) ++c;
        if (lp < nx - 2) ++c;
        if (lq < ny - 2) ++c;
      }
      nnz += c;
      A.row_ptr[size_t(lq) * nx + lp + 1] = int(nnz);
    }
  A.col.resize(nnz);
  A.val.resize(nnz);
  size_t at = 0;
  for (int lq = 0; lq < ny; ++lq)
    for (int lp = 0; lp < nx; ++lp) {
      const int row = lq * nx + lp;
      if (boundary(lp, lq)) {
        A.col[at] = row;
        A.val[at++] = Complex(1);
        continue;
      }
      const Complex ew = a2_node[lq] * inv_a1_half[lp - 1] * ih2;
      const Complex ee = a2_node[lq] * inv_a1_half[lp] * ih2;
      const Complex es = a1_node[lp] * inv_a2_half[lq - 1] * ih2;
      const Complex en = a1_node[lp] * inv_a2_half[lq] * ih2;
      const Complex diag =
          -(ew + ee + es + en) + k2[size_t(row)] * jac(lp, lq);
      if (lq > 1) {
        A.col[at] = row - nx;
        A.val[at++] = es;
      }
      if (lp > 1) {
        A.col[at] = row - 1;
        A.val[at++] = ew;
      }
      A.col[at] = row;
      A.val[at++] = diag;
      if (lp < nx - 2) {
        A.col[at] = row + 1;
        A.val[at++] = ee;
      }
      if (lq < ny - 2) {
        A.col[at] = row + nx;
        A.val[at++] = en;
      }
    }
  return A;
}

void DiscreteOperator::scale_rhs(const Complex* f, Complex* b) const {
  const int nx = win.nx, ny = win.ny;
  for (int lq = 0; lq < ny; ++lq)
    for (int lp = 0; lp < nx; ++lp) {
      const size_t i = size_t(lq) * nx + lp;
      if (lp == 0 || lp == nx - 1 || lq == 0 || lq == ny - 1)
        b[i] = Complex(0);
      else
        b[i] = jac(lp, lq) * f[i];
    }
}

}  // namespace helmddm
