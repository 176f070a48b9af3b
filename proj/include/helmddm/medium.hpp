#pragma once

#include "helmddm/types.hpp"

namespace helmddm {

enum class MediumKind { Constant, Layered };

/// Horizontal velocity band [y_lo, y_hi].
struct Layer {
  double y_lo = 0, y_hi = 0;
  double velocity = 1;
};

/// Velocity model over the interior domain plus the absorbing margin.
/// Outside the interior the velocity continues the nearest interior value.
struct MediumModel {
  MediumKind kind = MediumKind::Constant;
  double omega = 0;     // angular frequency
  double velocity = 1;  // Constant case
  std::vector<Layer> layers;  // Layered case, ordered bottom to top
  Box interior;         // physical domain
  double margin = 0;    // admissible overshoot past the interior per side

  double c_min() const;
  double c_max() const;
  double k_max() const { return omega / c_min(); }
  double k_min() const { return omega / c_max(); }
};

/// Five equal bands with the default velocity ladder over [box.y0, box.y1].
std::vector<Layer> default_layered(const Box& box);

/// omega / c at (x, y), with (x, y) clamped into the interior box first.
/// A y exactly on a band interface belongs to the band below it.
/// Throws std::domain_error if the point lies outside the interior dilated by
/// the margin.
double eval_wavenumber(const MediumModel& model, double x, double y);

enum class SourceKind { Gaussian, PointDelta };

struct SourceSpec {
  SourceKind kind = SourceKind::Gaussian;
  double x = 0, y = 0;  // center
};

/// Nodal samples of the source on a window.
///
/// Gaussian: f = (16 k_ref^2 / pi^3) exp(-(4 k_ref / pi)^2 r^2), normalized to
/// unit integral. PointDelta: 1/h^2 at the node nearest the center (ties to
/// the smaller index), zero elsewhere.
FieldGrid sample_source(const SourceSpec& src, const Lattice& lat,
                        const GridWindow& win, double k_ref);

}  // namespace helmddm
