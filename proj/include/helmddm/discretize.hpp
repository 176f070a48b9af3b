#pragma once

#include "helmddm/medium.hpp"
#include "helmddm/partition.hpp"
#include "helmddm/pml.hpp"
#include "helmddm/sparse.hpp"
#include "helmddm/types.hpp"

namespace helmddm {

/// Where a window's absorber anchors and which profile each side uses.
/// Interior-facing sides keep sigma = 0 for n_overlap nodes past the core
/// edge before ramping; outer sides ramp immediately and hold the plateau
/// for the remaining n_overlap nodes.
struct PmlLayout {
  int cx0 = 0, cx1 = 0, cy0 = 0, cy1 = 0;  // anchor core, global node indices
  bool left_interior = false, right_interior = false;
  bool bottom_interior = false, top_interior = false;
};

PmlLayout layout_for(const SubdomainWindow& s);
PmlLayout global_layout(const GridSpec& g);

/// Variable-coefficient Helmholtz operator with uniaxial complex stretching
/// on one window: L u = J^{-1} div(A grad u) + k^2 u, with
/// A = diag(a2/a1, a1/a2), J = a1 a2, a1 = a1(x), a2 = a2(y).
///
/// The finite-volume stencil shares each edge coefficient between the two
/// incident rows, so the J-scaled matrix is symmetric bit for bit. Stretch
/// samples are taken at integer half-step offsets from the anchor core, so
/// congruent windows produce identical coefficient arrays.
struct DiscreteOperator {
  GridWindow win;
  double h = 0;
  std::vector<Complex> a1_node, inv_a1_half;  // size nx, nx - 1
  std::vector<Complex> a2_node, inv_a2_half;  // size ny, ny - 1
  std::vector<double> k2;                     // nodal k^2, row-major local

  Complex jac(int lp, int lq) const { return a1_node[lp] * a2_node[lq]; }

  /// L-form stencil at an interior local node, reading the field through an
  /// accessor u(lp, lq).
  template <class F>
  Complex stencil(const F& u, int lp, int lq) const {
    const double ih2 = 1.0 / (h * h);
    const Complex uc = u(lp, lq);
    const Complex ex = a2_node[lq] * ih2;
    const Complex ey = a1_node[lp] * ih2;
    const Complex t = ex * inv_a1_half[lp] * (u(lp + 1, lq) - uc) -
                      ex * inv_a1_half[lp - 1] * (uc - u(lp - 1, lq)) +
                      ey * inv_a2_half[lq] * (u(lp, lq + 1) - uc) -
                      ey * inv_a2_half[lq - 1] * (uc - u(lp, lq - 1));
    return t / jac(lp, lq) + k2[size_t(lq) * win.nx + lp] * uc;
  }

  /// out = L u at interior nodes, out = u on the window boundary ring.
  void apply(const Complex* u, Complex* out) const;

  /// J-scaled symmetric matrix: identity rows on the boundary ring, interior
  /// rows drop couplings into boundary columns.
  SparseMatrix assemble() const;

  /// Right-hand side for the assembled matrix: b = J * f at interior nodes,
  /// 0 on the boundary ring.
  void scale_rhs(const Complex* f, Complex* b) const;
};

DiscreteOperator build_operator(const GridSpec& g, const GridWindow& win,
                                const PmlLayout& pml, const MediumModel& med,
                                double sigma0);

}  // namespace helmddm
