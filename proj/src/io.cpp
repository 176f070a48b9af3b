#include "helmddm/io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>

namespace helmddm {

static_assert(std::endian::native == std::endian::little,
              "dump format assumes a little-endian host");

FieldDump make_dump(const FieldGrid& f, const Lattice& lat) {
  FieldDump d;
  d.nx = uint32_t(f.win.nx);
  d.ny = uint32_t(f.win.ny);
  d.x0 = lat.x(f.win.x0);
  d.y0 = lat.y(f.win.y0);
  d.h = f.h;
  d.data = f.v;
  return d;
}

void write_field_dump(const std::string& path, const FieldDump& d) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  const uint32_t version = 1;
  out.write("HDMF", 4);
  auto put = [&out](const void* p, size_t n) {
    out.write(static_cast<const char*>(p), std::streamsize(n));
  };
  put(&version, 4);
  put(&d.nx, 4);
  put(&d.ny, 4);
  put(&d.x0, 8);
  put(&d.y0, 8);
  put(&d.h, 8);
  put(d.data.data(), d.data.size() * sizeof(Complex));
  if (!out) throw IoError("write failed: " + path);
}

FieldDump read_field_dump(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open: " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, "HDMF", 4) != 0)
    throw IoError("not a field dump: " + path);
  auto get = [&in, &path](void* p, size_t n) {
    in.read(static_cast<char*>(p), std::streamsize(n));
    if (!in) throw IoError("truncated field dump: " + path);
  };
  uint32_t version = 0;
  FieldDump d;
  get(&version, 4);
  if (version != 1) throw IoError("unsupported dump version in " + path);
  get(&d.nx, 4);
  get(&d.ny, 4);
  get(&d.x0, 8);
  get(&d.y0, 8);
  get(&d.h, 8);
  d.data.resize(size_t(d.nx) * d.ny);
  get(d.data.data(), d.data.size() * sizeof(Complex));
  in.peek();
  if (!in.eof()) throw IoError("trailing bytes in field dump: " + path);
  return d;
}

void write_ppm_real(const std::string& path, uint32_t nx, uint32_t ny,
                    const std::vector<Complex>& data, double vmax) {
  if (vmax <= 0) {
    for (const Complex& c : data) vmax = std::max(vmax, std::fabs(c.real()));
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << "P6\n" << nx << " " << ny << "\n255\n";
  std::vector<unsigned char> row(size_t(nx) * 3);
  for (uint32_t q = 0; q < ny; ++q) {
    for (uint32_t p = 0; p < nx; ++p) {
      double v = vmax > 0 ? data[size_t(q) * nx + p].real() / vmax : 0.0;
      v = std::clamp(v, -1.0, 1.0);
      unsigned char r, g, b;
      if (v >= 0) {
        r = 255;
        g = b = static_cast<unsigned char>(std::lround(255.0 * (1.0 - v)));
      } else {
        b = 255;
        r = g = static_cast<unsigned char>(std::lround(255.0 * (1.0 + v)));
      }
      row[size_t(p) * 3] = r;
      row[size_t(p) * 3 + 1] = g;
      row[size_t(p) * 3 + 2] = b;
    }
    out.write(reinterpret_cast<const char*>(row.data()),
              std::streamsize(row.size()));
  }
  if (!out) throw IoError("write failed: " + path);
}

void write_resid_csv(const std::string& path,
                     const std::vector<StepRecord>& hist) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << "step,relres,wall_ms\n";
  char buf[96];
  for (const StepRecord& r : hist) {
    std::snprintf(buf, sizeof buf, "%d,%.6e,%.3f\n", r.step, r.relres,
                  r.wall_ms);
    out << buf;
  }
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace helmddm
