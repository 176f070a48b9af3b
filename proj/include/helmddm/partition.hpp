#pragma once

#include <array>

#include "helmddm/types.hpp"

namespace helmddm {

/// Global lattice description: interior domain, spacing, partition layout and
/// absorber widths (in nodes). Every box (the global one and each subdomain
/// window) is dilated by n_overlap + n_ramp nodes per side; the absorber
/// profile differs between interior-facing and outer sides.
struct GridSpec {
  double x0 = 0, y0 = 0;  // interior lower-left corner
  double h = 0;
  int mx = 0, my = 0;     // interior cells per axis
  int n1 = 1, n2 = 1;     // subdomain grid
  int n_overlap = 10;     // blend taper width (nodes)
  int n_ramp = 20;        // absorber ramp width (nodes)

  int n_ext() const { return n_overlap + n_ramp; }
  int nodes_x() const { return mx + 2 * n_ext() + 1; }
  int nodes_y() const { return my + 2 * n_ext() + 1; }
  int core_cells_x() const { return mx / n1; }
  int core_cells_y() const { return my / n2; }
  double x1() const { return x0 + mx * h; }
  double y1() const { return y0 + my * h; }
  Box interior_box() const { return {x0, x1(), y0, y1()}; }
  Lattice lattice() const { return {x0 - n_ext() * h, y0 - n_ext() * h, h}; }
  GridWindow global_window() const { return {0, 0, nodes_x(), nodes_y()}; }
};

/// Quintic taper: 1 for t <= 0, 0 for t >= 1, C^2, symmetric about
/// (1/2, 1/2), monotone in between.
double beta0(double t);

/// One subdomain: its core node range (inclusive) and its dilated window.
struct SubdomainWindow {
  int i = 0, j = 0;
  int cx0 = 0, cx1 = 0, cy0 = 0, cy1 = 0;
  GridWindow win;
  bool left_interior = false, right_interior = false;
  bool bottom_interior = false, top_interior = false;
};

/// Separable assembly weights on a subdomain window: the nodal weight is
/// wx[p - win.x0] * wy[q - win.y0]; it equals 1 on the core and one node
/// past each interior-facing core edge, then tapers to 0 over the following
/// n_overlap nodes (outer sides carry no taper).
struct BlendWeights {
  std::vector<double> wx, wy;
};

struct Partition {
  GridSpec g;
  std::vector<SubdomainWindow> subs;      // row-major, i fastest
  std::vector<BlendWeights> weights;      // parallel to subs

  const SubdomainWindow& sub(int i, int j) const { return subs[j * g.n1 + i]; }
  const BlendWeights& weight(int i, int j) const { return weights[j * g.n1 + i]; }

  /// Core owning node column p / row q: shared-edge nodes go to the smaller
  /// index, absorber-strip nodes to the adjacent boundary subdomain.
  int owner_i(int p) const;
  int owner_j(int q) const;
};

Partition build_partition(const GridSpec& g);

/// Travel direction of a transfer, source to target.
enum class Dir { Left, Right, Down, Up, DownLeft, DownRight, UpLeft, UpRight };

/// Fixed gather order for step sources.
constexpr std::array<Dir, 8> kGatherOrder = {
    Dir::Left, Dir::Right, Dir::Down, Dir::Up,
    Dir::DownLeft, Dir::DownRight, Dir::UpLeft, Dir::UpRight};

constexpr bool is_corner(Dir d) { return static_cast<int>(d) >= 4; }

/// Source subdomain offset relative to the target, e.g. Right -> (-1, 0).
struct DirDelta {
  int di = 0, dj = 0;
};
DirDelta source_offset(Dir d);

/// Indicator of the target's receiving half-plane(s). Strict: the shared
/// cut node itself is excluded, so opposite masks never overlap and a
/// transfer never reads nodes where the reverse transfer deposited sources.
bool in_mask(Dir d, const SubdomainWindow& tgt, int p, int q);

/// Blend factor carried by the transfer in direction d into the target:
/// 1 through the first target-owned node past the cut, then tapering to 0
/// over n_overlap nodes (a product of two tapers for corner directions).
/// Identical, as a function, to the source subdomain's assembly weight.
double transfer_beta(Dir d, const SubdomainWindow& tgt, int n_overlap, int p,
                     int q);

}  // namespace helmddm
