#include "helmddm/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace helmddm {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

double parse_num(const std::string& key, const std::string& v) {
  try {
    size_t used = 0;
    double x = std::stod(v, &used);
    if (trim(v.substr(used)).empty()) return x;
  } catch (...) {
  }
  throw ConfigError("bad numeric value for '" + key + "': " + v);
}

int parse_int(const std::string& key, const std::string& v) {
  const double x = parse_num(key, v);
  const int i = int(std::lround(x));
  if (double(i) != x) throw ConfigError("expected integer for '" + key + "'");
  return i;
}

std::vector<double> parse_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(parse_num(key, item));
  }
  if (out.empty()) throw ConfigError("empty list for '" + key + "'");
  return out;
}

void apply_pair(RunConfig& c, const std::string& key, const std::string& val) {
  if (key == "domain.x0") c.domain.x0 = parse_num(key, val);
  else if (key == "domain.x1") c.domain.x1 = parse_num(key, val);
  else if (key == "domain.y0") c.domain.y0 = parse_num(key, val);
  else if (key == "domain.y1") c.domain.y1 = parse_num(key, val);
  else if (key == "freq") c.freq = parse_num(key, val);
  else if (key == "medium.type") c.medium_type = val;
  else if (key == "medium.velocity") c.velocity = parse_num(key, val);
  else if (key == "medium.layers") c.layer_velocities = parse_list(key, val);
  else if (key == "grid.h") c.grid_h = parse_num(key, val);
  else if (key == "grid.ppw") c.grid_ppw = parse_num(key, val);
  else if (key == "part.n1") c.n1 = parse_int(key, val);
  else if (key == "part.n2") c.n2 = parse_int(key, val);
  else if (key == "pml.n_ramp") c.n_ramp = parse_int(key, val);
  else if (key == "pml.n_overlap") c.n_overlap = parse_int(key, val);
  else if (key == "pml.c_sigma") c.c_sigma = parse_num(key, val);
  else if (key == "pml.sigma0") c.sigma0 = parse_num(key, val);
  else if (key == "source.type") c.source_type = val;
  else if (key == "source.x") {
    c.source_x = parse_num(key, val);
    c.source_at_center = false;
  } else if (key == "source.y") {
    c.source_y = parse_num(key, val);
    c.source_at_center = false;
  } else if (key == "solver.mode") c.mode = val;
  else if (key == "solver.tol") c.tol = parse_num(key, val);
  else if (key == "solver.max_steps") c.max_steps = parse_int(key, val);
  else if (key == "solver.check_every") c.check_every = parse_int(key, val);
  else if (key == "precond.k") c.precond_k = parse_int(key, val);
  else if (key == "krylov.tol") c.krylov_tol = parse_num(key, val);
  else if (key == "krylov.max_iter") c.krylov_max_iter = parse_int(key, val);
  else if (key == "krylov.restart") c.krylov_restart = parse_int(key, val);
  else if (key == "output.prefix") c.prefix = val;
  else if (key == "threads") c.threads = parse_int(key, val);
  else if (key == "conv.levels") c.conv_levels = parse_int(key, val);
  else if (key == "conv.ref") c.conv_ref = val;
  else if (key == "sparse.backend") c.sparse_backend = val;
  else throw ConfigError("unknown config key: " + key);
}

void apply_line(RunConfig& c, std::string line, int lineno) {
  const size_t hash = line.find('#');
  if (hash != std::string::npos) line = line.substr(0, hash);
  line = trim(line);
  if (line.empty()) return;
  const size_t eq = line.find('=');
  if (eq == std::string::npos)
    throw ConfigError("line " + std::to_string(lineno) +
                      ": expected key = value");
  const std::string key = trim(line.substr(0, eq));
  const std::string val = trim(line.substr(eq + 1));
  if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
  apply_pair(c, key, val);
}

void check_enum(const std::string& key, const std::string& v,
                std::initializer_list<const char*> allowed) {
  for (const char* a : allowed)
    if (v == a) return;
  throw ConfigError("invalid value for " + key + ": " + v);
}

void validate(RunConfig& c) {
  if (!(c.domain.width() > 0) || !(c.domain.height() > 0))
    throw ConfigError("domain must have positive extent");
  if (!(c.freq > 0)) throw ConfigError("freq must be positive");
  check_enum("medium.type", c.medium_type, {"constant", "layered"});
  if (c.medium_type == "constant" && !(c.velocity > 0))
    throw ConfigError("medium.velocity must be positive");
  for (double v : c.layer_velocities)
    if (!(v > 0)) throw ConfigError("layer velocities must be positive");
  if ((c.grid_h > 0) == (c.grid_ppw > 0))
    throw ConfigError("set exactly one of grid.h and grid.ppw");
  if (c.grid_h < 0 || c.grid_ppw < 0)
    throw ConfigError("grid spacing parameters must be positive");
  if (c.n1 < 1 || c.n2 < 1) throw ConfigError("part.n1/n2 must be >= 1");
  if (c.n_ramp < 1) throw ConfigError("pml.n_ramp must be >= 1");
  if (c.n_overlap < 0) throw ConfigError("pml.n_overlap must be >= 0");
  if (!(c.c_sigma > 0) && !(c.sigma0 > 0))
    throw ConfigError("pml.c_sigma or pml.sigma0 must be positive");
  check_enum("source.type", c.source_type, {"gaussian", "point"});
  check_enum("solver.mode", c.mode, {"ddm", "fgmres", "direct"});
  if (!(c.tol > 0) || !(c.krylov_tol > 0))
    throw ConfigError("tolerances must be positive");
  if (c.max_steps < 1 || c.krylov_max_iter < 1)
    throw ConfigError("iteration limits must be >= 1");
  if (c.check_every < 1) throw ConfigError("solver.check_every must be >= 1");
  if (c.precond_k < 0) throw ConfigError("precond.k must be nonnegative");
  if (c.krylov_restart < 0) throw ConfigError("krylov.restart must be >= 0");
  if (c.threads < 1) throw ConfigError("threads must be >= 1");
  if (c.conv_levels < 2) throw ConfigError("conv.levels must be >= 2");
  check_enum("conv.ref", c.conv_ref, {"direct", "greens"});
  check_enum("sparse.backend", c.sparse_backend, {"auto", "lu"});
  if (c.prefix.empty()) throw ConfigError("output.prefix must be nonempty");
}

}  // namespace

RunConfig parse_config_text(const std::string& text,
                            const std::vector<std::string>& overrides) {
  RunConfig c;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) apply_line(c, line, ++lineno);
  for (const std::string& ov : overrides) {
    const size_t eq = ov.find('=');
    if (eq == std::string::npos)
      throw ConfigError("override must be key=value: " + ov);
    apply_pair(c, trim(ov.substr(0, eq)), trim(ov.substr(eq + 1)));
  }
  validate(c);
  return c;
}

RunConfig parse_config_file(const std::string& path,
                            const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), overrides);
}

ProblemSetup make_setup(const RunConfig& cfg) {
  ProblemSetup s;
  MediumModel& med = s.medium;
  med.omega = 2.0 * M_PI * cfg.freq;
  med.interior = cfg.domain;
  if (cfg.medium_type == "constant") {
    med.kind = MediumKind::Constant;
    med.velocity = cfg.velocity;
  } else {
    med.kind = MediumKind::Layered;
    if (cfg.layer_velocities.empty()) {
      med.layers = default_layered(cfg.domain);
    } else {
      const int n = int(cfg.layer_velocities.size());
      const double dy = cfg.domain.height() / n;
      for (int i = 0; i < n; ++i)
        med.layers.push_back({cfg.domain.y0 + i * dy,
                              i == n - 1 ? cfg.domain.y1
                                         : cfg.domain.y0 + (i + 1) * dy,
                              cfg.layer_velocities[i]});
    }
  }

  GridSpec& g = s.grid;
  g.x0 = cfg.domain.x0;
  g.y0 = cfg.domain.y0;
  g.n1 = cfg.n1;
  g.n2 = cfg.n2;
  g.n_ramp = cfg.n_ramp;
  g.n_overlap = cfg.n_overlap;
  // Snap cell counts to the partition; the x extent is exact, the y extent
  // moves to the nearest multiple of the resulting spacing.
  const double h_goal = cfg.grid_h > 0
                            ? cfg.grid_h
                            : med.c_min() / (cfg.freq * cfg.grid_ppw);
  g.mx = cfg.n1 * std::max<long>(1, std::lround(cfg.domain.width() /
                                                (h_goal * cfg.n1)));
  g.h = cfg.domain.width() / g.mx;
  g.my = cfg.n2 * std::max<long>(1, std::lround(cfg.domain.height() /
                                                (g.h * cfg.n2)));
  med.interior.y1 = med.interior.y0 + g.my * g.h;
  if (med.kind == MediumKind::Layered && cfg.layer_velocities.empty() &&
      std::fabs(med.interior.y1 - cfg.domain.y1) > 1e-12 * g.h)
    med.layers = default_layered(med.interior);

  s.source.kind = cfg.source_type == "point" ? SourceKind::PointDelta
                                             : SourceKind::Gaussian;
  s.source.x = cfg.source_at_center ? 0.5 * (cfg.domain.x0 + cfg.domain.x1)
                                    : cfg.source_x;
  s.source.y = cfg.source_at_center
                   ? 0.5 * (med.interior.y0 + med.interior.y1)
                   : cfg.source_y;
  med.margin = (g.n_ext() + 1) * g.h;
  s.k_source = eval_wavenumber(med, s.source.x, s.source.y);
  return s;
}

}  // namespace helmddm
