#pragma once

#include <string>

#include "helmddm/medium.hpp"
#include "helmddm/partition.hpp"
#include "helmddm/types.hpp"

namespace helmddm {

/// Run parameters parsed from a `key = value` file (one pair per line,
/// `#` comments) plus repeatable `--override key=value` flags. Unknown keys
/// are rejected.
struct RunConfig {
  Box domain{0, 1, 0, 1};
  double freq = 0;  // omega / 2 pi; required
  std::string medium_type = "constant";
  double velocity = 1.0;
  std::vector<double> layer_velocities;  // empty: default ladder when layered
  double grid_h = 0;                     // exactly one of grid_h /
  double grid_ppw = 0;                   // grid_ppw must be set
  int n1 = 1, n2 = 1;
  int n_ramp = 20, n_overlap = 10;
  double c_sigma = 25.0;
  double sigma0 = 0;  // > 0 overrides c_sigma
  std::string source_type = "gaussian";
  double source_x = 0, source_y = 0;
  bool source_at_center = true;  // until source.x / source.y appear
  std::string mode = "ddm";
  double tol = 1e-8;
  int max_steps = 200;
  int check_every = 1;
  int precond_k = 0;  // 0: defaults to n1 + n2
  double krylov_tol = 1e-8;
  int krylov_max_iter = 200;
  int krylov_restart = 0;
  std::string prefix = "out";
  int threads = 1;
  int conv_levels = 3;
  std::string conv_ref = "direct";  // direct | greens
  std::string sparse_backend = "auto";  // auto | lu
};

RunConfig parse_config_text(const std::string& text,
                            const std::vector<std::string>& overrides);
RunConfig parse_config_file(const std::string& path,
                            const std::vector<std::string>& overrides);

/// Derived problem pieces shared by every mode.
struct ProblemSetup {
  GridSpec grid;
  MediumModel medium;
  SourceSpec source;
  double k_source = 0;  // wavenumber at the source center
};

/// Resolves the lattice (snapping counts to the partition), the velocity
/// model, and the source position. The domain height is adjusted to the
/// nearest lattice-compatible value when grid.ppw drives the spacing.
ProblemSetup make_setup(const RunConfig& cfg);

}  // namespace helmddm
