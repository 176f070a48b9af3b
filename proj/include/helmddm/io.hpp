#pragma once

#include <cstdint>
#include <string>

#include "helmddm/ddm.hpp"
#include "helmddm/types.hpp"

namespace helmddm {

/// On-disk field snapshot. Layout: magic "HDMF", u32 version (= 1), u32 nx,
/// u32 ny, f64 x0, f64 y0, f64 h, then nx*ny (re, im) f64 pairs, row-major
/// with x fastest. Everything little-endian.
struct FieldDump {
  uint32_t nx = 0, ny = 0;
  double x0 = 0, y0 = 0, h = 0;
  std::vector<Complex> data;
};

FieldDump make_dump(const FieldGrid& f, const Lattice& lat);

void write_field_dump(const std::string& path, const FieldDump& d);
FieldDump read_field_dump(const std::string& path);

/// Binary PPM of Re(u): linear blue(-1) / white(0) / red(+1) about vmax,
/// one pixel per node, node y increasing downward. vmax <= 0 picks
/// max |Re(u)| (an all-zero field renders white).
void write_ppm_real(const std::string& path, uint32_t nx, uint32_t ny,
                    const std::vector<Complex>& data, double vmax);

void write_resid_csv(const std::string& path,
                     const std::vector<StepRecord>& hist);

}  // namespace helmddm
