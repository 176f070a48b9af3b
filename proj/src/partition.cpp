#include "helmddm/partition.hpp"

#include <stdexcept>

namespace helmddm {

double beta0(double t) {
  if (t <= 0) return 1.0;
  if (t >= 1) return 0.0;
  return 1.0 - t * t * t * (10.0 - 15.0 * t + 6.0 * t * t);
}

namespace {

void check_spec(const GridSpec& g) {
  if (!(g.h > 0)) throw ConfigError("grid spacing must be positive");
  if (g.mx < 1 || g.my < 1) throw ConfigError("interior cell counts must be positive");
  if (g.n1 < 1 || g.n2 < 1) throw ConfigError("subdomain counts must be positive");
  if (g.mx % g.n1 != 0 || g.my % g.n2 != 0)
    throw ConfigError("interior cells must divide evenly among subdomains");
  if (g.n_ramp < 1) throw ConfigError("absorber ramp width must be positive");
  if (g.n_overlap < 0) throw ConfigError("overlap width must be nonnegative");
  const bool split = g.n1 > 1 || g.n2 > 1;
  if (split && g.n_overlap < 1)
    throw ConfigError("overlap width must be positive when the domain is split");
  if (split && (g.core_cells_x() < g.n_overlap + 1 || g.core_cells_y() < g.n_overlap + 1))
    throw ConfigError("subdomain cores too small for the requested overlap");
}

// Weight along one axis for core node range [c0, c1]: 1 on the core and one
// node past each interior-facing edge (so the taper's variation sits strictly
// inside the neighbor-owned columns), then a beta0 fade over n_ov nodes;
// hard 1 continuation on outer edges (those sides see only absorber nodes).
std::vector<double> axis_weights(const GridWindow& win, int axis, int c0, int c1,
                                 bool lo_interior, bool hi_interior, int n_ov) {
  const int o = axis == 0 ? win.x0 : win.y0;
  const int n = axis == 0 ? win.nx : win.ny;
  std::vector<double> w(n, 1.0);
  for (int t = 0; t < n; ++t) {
    const int p = o + t;
    double v = 1.0;
    if (p < c0) v = lo_interior ? beta0(double(c0 - 1 - p) / n_ov) : 1.0;
    else if (p > c1) v = hi_interior ? beta0(double(p - c1 - 1) / n_ov) : 1.0;
    w[t] = v;
  }
  return w;
}

}  // namespace

Partition build_partition(const GridSpec& g) {
  check_spec(g);
  Partition part;
  part.g = g;
  const int ext = g.n_ext();
  const int mcx = g.core_cells_x(), mcy = g.core_cells_y();
  part.subs.reserve(size_t(g.n1) * g.n2);
  part.weights.reserve(size_t(g.n1) * g.n2);
  for (int j = 0; j < g.n2; ++j) {
    for (int i = 0; i < g.n1; ++i) {
      SubdomainWindow s;
      s.i = i;
      s.j = j;
      s.cx0 = ext + i * mcx;
      s.cx1 = ext + (i + 1) * mcx;
      s.cy0 = ext + j * mcy;
      s.cy1 = ext + (j + 1) * mcy;
      s.win = {s.cx0 - ext, s.cy0 - ext, mcx + 2 * ext + 1, mcy + 2 * ext + 1};
      s.left_interior = i > 0;
      s.right_interior = i < g.n1 - 1;
      s.bottom_interior = j > 0;
      s.top_interior = j < g.n2 - 1;
      part.subs.push_back(s);
      BlendWeights bw;
      bw.wx = axis_weights(s.win, 0, s.cx0, s.cx1, s.left_interior,
                           s.right_interior, g.n_overlap);
      bw.wy = axis_weights(s.win, 1, s.cy0, s.cy1, s.bottom_interior,
                           s.top_interior, g.n_overlap);
      part.weights.push_back(std::move(bw));
    }
  }
  return part;
}

namespace {
int owner_1d(int p, int ext, int cells, int n) {
  const int pi = p - ext;
  if (pi <= 0) return 0;
  int i = (pi + cells - 1) / cells - 1;
  if (i < 0) i = 0;
  if (i > n - 1) i = n - 1;
  return i;
}
}  // namespace

int Partition::owner_i(int p) const { return owner_1d(p, g.n_ext(), g.core_cells_x(), g.n1); }
int Partition::owner_j(int q) const { return owner_1d(q, g.n_ext(), g.core_cells_y(), g.n2); }

DirDelta source_offset(Dir d) {
  switch (d) {
    case Dir::Left: return {+1, 0};
    case Dir::Right: return {-1, 0};
    case Dir::Down: return {0, +1};
    case Dir::Up: return {0, -1};
    case Dir::DownLeft: return {+1, +1};
    case Dir::DownRight: return {-1, +1};
    case Dir::UpLeft: return {+1, -1};
    case Dir::UpRight: return {-1, -1};
  }
  return {0, 0};
}

// Masks cover exactly the columns/rows the receiving subdomain owns: the
// shared cut node stays with the source side, so a transfer never re-reads
// the nodes where the opposite-direction transfer (or the original forcing)
// deposited its source values. Opposite masks tile the lattice exactly.
bool in_mask(Dir d, const SubdomainWindow& t, int p, int q) {
  switch (d) {
    case Dir::Left: return p <= t.cx1 - 1;
    case Dir::Right: return p >= t.cx0 + 1;
    case Dir::Down: return q <= t.cy1 - 1;
    case Dir::Up: return q >= t.cy0 + 1;
    case Dir::DownLeft: return p <= t.cx1 - 1 && q <= t.cy1 - 1;
    case Dir::DownRight: return p >= t.cx0 + 1 && q <= t.cy1 - 1;
    case Dir::UpLeft: return p <= t.cx1 - 1 && q >= t.cy0 + 1;
    case Dir::UpRight: return p >= t.cx0 + 1 && q >= t.cy0 + 1;
  }
  return false;
}

double transfer_beta(Dir d, const SubdomainWindow& t, int n_ov, int p, int q) {
  // The taper holds 1 through the first node the target owns (one past the
  // shared core edge) and reaches 0 n_ov nodes later. Keeping the plateau
  // through that node puts the whole variation of the taper strictly inside
  // the mask, so the receiving solve carries every kink term and the
  // assembled blend telescopes without leftovers on the cut itself.
  const auto from_left = [&] { return beta0(double(p - t.cx0 - 1) / n_ov); };
  const auto from_right = [&] { return beta0(double(t.cx1 - 1 - p) / n_ov); };
  const auto from_below = [&] { return beta0(double(q - t.cy0 - 1) / n_ov); };
  const auto from_above = [&] { return beta0(double(t.cy1 - 1 - q) / n_ov); };
  switch (d) {
    case Dir::Left: return from_right();
    case Dir::Right: return from_left();
    case Dir::Down: return from_above();
    case Dir::Up: return from_below();
    case Dir::DownLeft: return from_right() * from_above();
    case Dir::DownRight: return from_left() * from_above();
    case Dir::UpLeft: return from_right() * from_below();
    case Dir::UpRight: return from_left() * from_below();
  }
  return 0.0;
}

}  // namespace helmddm
