#include "helmddm/medium.hpp"

#include <algorithm>
#include <cmath>

namespace helmddm {

double MediumModel::c_min() const {
  if (kind == MediumKind::Constant) return velocity;
  double m = layers.front().velocity;
  for (const auto& l : layers) m = std::min(m, l.velocity);
  return m;
}

double MediumModel::c_max() const {
  if (kind == MediumKind::Constant) return velocity;
  double m = layers.front().velocity;
  for (const auto& l : layers) m = std::max(m, l.velocity);
  return m;
}

std::vector<Layer> default_layered(const Box& box) {
  const double v[5] = {1.00, 1.25, 1.60, 2.00, 2.50};
  std::vector<Layer> out;
  double dy = box.height() / 5.0;
  for (int i = 0; i < 5; ++i)
    out.push_back({box.y0 + i * dy, i == 4 ? box.y1 : box.y0 + (i + 1) * dy, v[i]});
  return out;
}

double eval_wavenumber(const MediumModel& model, double x, double y) {
  const Box& b = model.interior;
  double m = model.margin;
  if (x < b.x0 - m || x > b.x1 + m || y < b.y0 - m || y > b.y1 + m)
    throw std::domain_error("eval_wavenumber: point outside the padded domain");
  double yc = std::clamp(y, b.y0, b.y1);
  double c;
  if (model.kind == MediumKind::Constant) {
    c = model.velocity;
  } else {
    // upper-boundary ties belong to the band below
    c = model.layers.back().velocity;
    for (const auto& l : model.layers)
      if (yc <= l.y_hi) {
        c = l.velocity;
        break;
      }
  }
  return model.omega / c;
}

FieldGrid sample_source(const SourceSpec& src, const Lattice& lat,
                        const GridWindow& win, double k_ref) {
  FieldGrid f(win, lat.h);
  if (src.kind == SourceKind::PointDelta) {
    // nearest node, ties toward the smaller index
    int p = static_cast<int>(std::ceil((src.x - lat.ox) / lat.h - 0.5));
    int q = static_cast<int>(std::ceil((src.y - lat.oy) / lat.h - 0.5));
    if (win.contains(p, q)) f.at(p, q) = Complex(1.0 / (lat.h * lat.h), 0.0);
    return f;
  }
  double amp = 16.0 * k_ref * k_ref / (M_PI * M_PI * M_PI);
  double w = 4.0 * k_ref / M_PI;
  double w2 = w * w;
  for (int q = win.y0; q < win.y0 + win.ny; ++q) {
    double dy = lat.y(q) - src.y;
    for (int p = win.x0; p < win.x0 + win.nx; ++p) {
      double dx = lat.x(p) - src.x;
      f.at(p, q) = Complex(amp * std::exp(-w2 * (dx * dx + dy * dy)), 0.0);
    }
  }
  return f;
}

}  // namespace helmddm
