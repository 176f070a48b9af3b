#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace helmddm {

using Complex = std::complex<double>;

/// Axis-aligned rectangle.
struct Box {
  double x0 = 0, x1 = 0, y0 = 0, y1 = 0;
  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
};

/// Uniform lattice: node (p, q) sits at (ox + p*h, oy + q*h).
struct Lattice {
  double ox = 0, oy = 0, h = 0;
  double x(int p) const { return ox + p * h; }
  double y(int q) const { return oy + q * h; }
};

/// Rectangular node range on the global lattice.
struct GridWindow {
  int x0 = 0, y0 = 0;  // origin node index
  int nx = 0, ny = 0;  // node counts
  long size() const { return static_cast<long>(nx) * ny; }
  bool contains(int p, int q) const {
    return p >= x0 && p < x0 + nx && q >= y0 && q < y0 + ny;
  }
};

/// Complex nodal field on a window, row-major with x fastest.
struct FieldGrid {
  GridWindow win;
  double h = 0;
  std::vector<Complex> v;

  FieldGrid() = default;
  FieldGrid(GridWindow w, double spacing)
      : win(w), h(spacing), v(static_cast<size_t>(w.size()), Complex(0)) {}

  long idx(int p, int q) const {  // p, q are global node indices
    return static_cast<long>(q - win.y0) * win.nx + (p - win.x0);
  }
  Complex& at(int p, int q) { return v[idx(p, q)]; }
  const Complex& at(int p, int q) const { return v[idx(p, q)]; }
  /// Zero-extended lookup outside the window.
  Complex at0(int p, int q) const {
    return win.contains(p, q) ? v[idx(p, q)] : Complex(0);
  }
  void fill_zero() { std::fill(v.begin(), v.end(), Complex(0)); }
};

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& m) : std::runtime_error(m) {}
};
struct SolveError : std::runtime_error {
  explicit SolveError(const std::string& m) : std::runtime_error(m) {}
};
struct IoError : std::runtime_error {
  explicit IoError(const std::string& m) : std::runtime_error(m) {}
};

}  // namespace helmddm
