#include "helmddm/transfer.hpp"

#include <algorithm>

namespace helmddm {

PatchBox transfer_patch(Dir d, const SubdomainWindow& t, int n_ov) {
  const int ix0 = t.win.x0 + 1, ix1 = t.win.x0 + t.win.nx - 2;
  const int iy0 = t.win.y0 + 1, iy1 = t.win.y0 + t.win.ny - 2;
  PatchBox b{ix0, ix1, iy0, iy1};
  // Intersection of the mask half-plane(s) with the taper band(s): nothing
  // survives on source-owned nodes (mask zero) or past the taper (beta
  // stencil-wide zero), so e.g. a rightward transfer lands on rows
  // [cx0 + 1, cx0 + 1 + n_ov].
  switch (d) {
    case Dir::Right:
      b.p0 = t.cx0 + 1;
      b.p1 = t.cx0 + 1 + n_ov;
      break;
    case Dir::Left:
      b.p0 = t.cx1 - 1 - n_ov;
      b.p1 = t.cx1 - 1;
      break;
    case Dir::Up:
      b.q0 = t.cy0 + 1;
      b.q1 = t.cy0 + 1 + n_ov;
      break;
    case Dir::Down:
      b.q0 = t.cy1 - 1 - n_ov;
      b.q1 = t.cy1 - 1;
      break;
    case Dir::UpRight:
      b.p0 = t.cx0 + 1;
      b.p1 = t.cx0 + 1 + n_ov;
      b.q0 = t.cy0 + 1;
      b.q1 = t.cy0 + 1 + n_ov;
      break;
    case Dir::UpLeft:
      b.p0 = t.cx1 - 1 - n_ov;
      b.p1 = t.cx1 - 1;
      b.q0 = t.cy0 + 1;
      b.q1 = t.cy0 + 1 + n_ov;
      break;
    case Dir::DownRight:
      b.p0 = t.cx0 + 1;
      b.p1 = t.cx0 + 1 + n_ov;
      b.q0 = t.cy1 - 1 - n_ov;
      b.q1 = t.cy1 - 1;
      break;
    case Dir::DownLeft:
      b.p0 = t.cx1 - 1 - n_ov;
      b.p1 = t.cx1 - 1;
      b.q0 = t.cy1 - 1 - n_ov;
      b.q1 = t.cy1 - 1;
      break;
  }
  b.p0 = std::max(b.p0, ix0);
  b.p1 = std::min(b.p1, ix1);
  b.q0 = std::max(b.q0, iy0);
  b.q1 = std::min(b.q1, iy1);
  return b;
}

void add_transfer(Dir d, const DiscreteOperator& op_t,
                  const SubdomainWindow& t, int n_ov, const FieldGrid& v,
                  FieldGrid& acc, TransferScratch& scratch) {
  const PatchBox b = transfer_patch(d, t, n_ov);
  if (b.empty()) return;
  // Tapered copy of the source field on the patch plus a one-node ring.
  const int wx0 = b.p0 - 1, wy0 = b.q0 - 1;
  const int wnx = b.p1 - b.p0 + 3, wny = b.q1 - b.q0 + 3;
  scratch.w.assign(size_t(wnx) * wny, Complex(0));
  Complex* w = scratch.w.data();
  for (int q = wy0; q < wy0 + wny; ++q)
    for (int p = wx0; p < wx0 + wnx; ++p) {
      const Complex vv = v.at0(p, q);
      if (vv != Complex(0))
        w[size_t(q - wy0) * wnx + (p - wx0)] =
            transfer_beta(d, t, n_ov, p, q) * vv;
    }
  auto wref = [&](int lp, int lq) -> Complex {
    // stencil works in target-local indices; translate into the w buffer
    return w[size_t(t.win.y0 + lq - wy0) * wnx + (t.win.x0 + lp - wx0)];
  };
  for (int q = b.q0; q <= b.q1; ++q)
    for (int p = b.p0; p <= b.p1; ++p)
      acc.at(p, q) -= op_t.stencil(wref, p - t.win.x0, q - t.win.y0);
}

}  // namespace helmddm
