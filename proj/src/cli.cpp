#include "helmddm/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "helmddm/config.hpp"
#include "helmddm/ddm.hpp"
#include "helmddm/io.hpp"
#include "helmddm/krylov.hpp"
#include "helmddm/oracle.hpp"

namespace helmddm {

namespace {

const char* kUsage =
    "usage: helmddm <command> [options]\n"
    "commands:\n"
    "  solve <config>         run the mode selected by solver.mode\n"
    "  direct <config>        factor and solve the global system in one shot\n"
    "  convergence <config>   dyadic mesh refinement study\n"
    "  render <dump> <out.ppm>\n"
    "options:\n"
    "  --override key=value   set/replace a config entry (repeatable)\n"
    "  --quiet                suppress progress output\n";

struct CliArgs {
  std::string cmd;
  std::vector<std::string> pos;
  std::vector<std::string> overrides;
  bool quiet = false;
  bool help = false;
};

CliArgs parse_args(int argc, char** argv) {
  CliArgs a;
  for (int i = 1; i < argc; ++i) {
    const std::string s = argv[i];
    if (s == "-h" || s == "--help") {
      a.help = true;
    } else if (s == "--quiet") {
      a.quiet = true;
    } else if (s == "--override") {
      if (i + 1 >= argc) throw ConfigError("--override needs key=value");
      a.overrides.push_back(argv[++i]);
    } else if (s.rfind("--override=", 0) == 0) {
      a.overrides.push_back(s.substr(11));
    } else if (!s.empty() && s[0] == '-') {
      throw ConfigError("unknown option: " + s);
    } else if (a.cmd.empty()) {
      a.cmd = s;
    } else {
      a.pos.push_back(s);
    }
  }
  return a;
}

int env_threads(int fallback) {
  const char* e = std::getenv("HELMDDM_THREADS");
  if (!e || !*e) return fallback;
  char* end = nullptr;
  const long v = std::strtol(e, &end, 10);
  if ((end && *end) || v < 1)
    throw ConfigError("bad HELMDDM_THREADS value");
  return int(v);
}

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - t0)
      .count();
}

struct RunArtifacts {
  std::string mode;
  const GridSpec* grid = nullptr;
  double sigma0 = 0;
  int threads = 1;
  std::vector<OpClassInfo> classes;
  int n_ddm_iter = 0;
  int sweep_len = 1;  // n1 + n2
  int n_gmres_iter = 0;
  int precond_k = 0;
  double relres = -1, true_relres = -1;
  bool converged = true;
  double factor_ms = 0, solve_ms = 0, total_ms = 0;
};

void write_stats(const std::string& path, const RunArtifacts& r) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  char buf[160];
  out << "mode = " << r.mode << "\n";
  if (r.grid) {
    std::snprintf(buf, sizeof buf,
                  "grid.cells = %d x %d\ngrid.h = %.9e\npartition = %d x %d\n"
                  "pml.n_ramp = %d\npml.n_overlap = %d\npml.sigma0 = %.9e\n",
                  r.grid->mx, r.grid->my, r.grid->h, r.grid->n1, r.grid->n2,
                  r.grid->n_ramp, r.grid->n_overlap, r.sigma0);
    out << buf;
  }
  out << "threads = " << r.threads << "\n";
  int n_ldlt = 0, n_lu = 0;
  for (const auto& c : r.classes) (std::strcmp(c.backend, "ldlt") == 0 ? n_ldlt : n_lu) += 1;
  out << "factor.classes = " << r.classes.size() << "\n";
  out << "factor.backend.ldlt = " << n_ldlt << "\n";
  out << "factor.backend.lu = " << n_lu << "\n";
  out << "n_DDM_Iter = " << r.n_ddm_iter << "\n";
  std::snprintf(buf, sizeof buf, "n_DDM_Solv = %.2f\n",
                double(r.n_ddm_iter) / r.sweep_len);
  out << buf;
  out << "n_GMRES_Iter = " << r.n_gmres_iter << "\n";
  out << "n_Local_Solv = " << long(r.n_gmres_iter) * r.precond_k << "\n";
  if (r.precond_k > 0) out << "precond.k = " << r.precond_k << "\n";
  std::snprintf(buf, sizeof buf, "relres = %.6e\n", r.relres);
  out << buf;
  if (r.true_relres >= 0) {
    std::snprintf(buf, sizeof buf, "true_relres = %.6e\n", r.true_relres);
    out << buf;
  }
  out << "converged = " << (r.converged ? "yes" : "no") << "\n";
  std::snprintf(buf, sizeof buf,
                "factor_ms = %.1f\nsolve_ms = %.1f\ntotal_ms = %.1f\n",
                r.factor_ms, r.solve_ms, r.total_ms);
  out << buf;
  if (!out) throw IoError("write failed: " + path);
}

void write_field_artifacts(const RunConfig& cfg, const ProblemSetup& st,
                           const FieldGrid& u) {
  const Lattice lat = st.grid.lattice();
  const FieldDump d = make_dump(u, lat);
  write_field_dump(cfg.prefix + "_field.hdmf", d);
  write_ppm_real(cfg.prefix + "_real.ppm", d.nx, d.ny, d.data, 0);
}

void announce(bool quiet, const std::string& line) {
  if (!quiet) std::cout << line << "\n";
}

std::string describe(const ProblemSetup& st, double sigma0) {
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "grid %dx%d cells, h=%.4e, partition %dx%d, sigma0=%.4e",
                st.grid.mx, st.grid.my, st.grid.h, st.grid.n1, st.grid.n2,
                sigma0);
  return buf;
}

DdmConfig engine_config(const RunConfig& cfg, const ProblemSetup& st,
                        int threads) {
  DdmConfig dc;
  dc.grid = st.grid;
  dc.medium = st.medium;
  dc.c_sigma = cfg.c_sigma;
  dc.sigma0 = cfg.sigma0;
  dc.force_lu = cfg.sparse_backend == "lu";
  dc.threads = threads;
  return dc;
}

int run_ddm(const RunConfig& cfg, const ProblemSetup& st, int threads,
            bool quiet) {
  const auto t0 = std::chrono::steady_clock::now();
  DdmEngine eng(engine_config(cfg, st, threads));
  announce(quiet, describe(st, eng.sigma0()));
  const FieldGrid f = sample_source(st.source, st.grid.lattice(),
                                    st.grid.global_window(), st.k_source);
  DdmStats stats;
  const FieldGrid u =
      eng.solve_iterative(f.v, cfg.tol, cfg.max_steps, stats, cfg.check_every);
  for (const StepRecord& r : stats.history) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "step %4d  relres %.3e", r.step, r.relres);
    announce(quiet, buf);
  }
  RunArtifacts ra;
  ra.mode = "ddm";
  ra.grid = &st.grid;
  ra.sigma0 = eng.sigma0();
  ra.threads = threads;
  ra.classes = eng.class_info();
  ra.n_ddm_iter = stats.steps;
  ra.sweep_len = st.grid.n1 + st.grid.n2;
  ra.relres = stats.relres;
  ra.converged = stats.converged;
  ra.factor_ms = eng.factor_ms();
  ra.solve_ms = stats.sweep_ms;
  ra.total_ms = ms_since(t0);
  write_field_artifacts(cfg, st, u);
  write_resid_csv(cfg.prefix + "_resid.csv", stats.history);
  write_stats(cfg.prefix + "_stats.txt", ra);
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "%s after %d steps (n_DDM_Solv %.2f), relres %.3e",
                stats.converged ? "converged" : "NOT converged", stats.steps,
                double(stats.steps) / ra.sweep_len, stats.relres);
  announce(quiet, buf);
  return stats.converged ? 0 : 3;
}

int run_fgmres(const RunConfig& cfg, const ProblemSetup& st, int threads,
               bool quiet) {
  const auto t0 = std::chrono::steady_clock::now();
  DdmEngine eng(engine_config(cfg, st, threads));
  announce(quiet, describe(st, eng.sigma0()));
  const FieldGrid f = sample_source(st.source, st.grid.lattice(),
                                    st.grid.global_window(), st.k_source);
  const int K = cfg.precond_k > 0 ? cfg.precond_k : st.grid.n1 + st.grid.n2;
  DdmStats pstats;
  LinearOp A = [&eng](const Complex* x, Complex* y) { eng.apply_global(x, y); };
  LinearOp M = [&eng, &pstats, K](const Complex* r, Complex* z) {
    eng.precondition(r, z, K, pstats);
  };
  FgmresOptions ko;
  ko.tol = cfg.krylov_tol;
  ko.max_iters = cfg.krylov_max_iter;
  ko.restart = cfg.krylov_restart;
  std::vector<Complex> x;
  const FgmresResult kr = fgmres(eng.n_global(), A, M, f.v, x, ko);
  FieldGrid u(st.grid.global_window(), st.grid.h);
  u.v = x;
  std::vector<StepRecord> hist;
  for (size_t i = 0; i < kr.history.size(); ++i)
    hist.push_back({int(i) + 1, kr.history[i],
                    i < kr.iter_ms.size() ? kr.iter_ms[i] : 0.0});
  RunArtifacts ra;
  ra.mode = "fgmres";
  ra.grid = &st.grid;
  ra.sigma0 = eng.sigma0();
  ra.threads = threads;
  ra.classes = eng.class_info();
  ra.sweep_len = st.grid.n1 + st.grid.n2;
  ra.n_gmres_iter = kr.iters;
  ra.precond_k = K;
  ra.relres = kr.relres;
  ra.true_relres = kr.true_relres;
  ra.converged = kr.converged;
  ra.factor_ms = eng.factor_ms();
  ra.solve_ms = pstats.sweep_ms;
  ra.total_ms = ms_since(t0);
  write_field_artifacts(cfg, st, u);
  write_resid_csv(cfg.prefix + "_resid.csv", hist);
  write_stats(cfg.prefix + "_stats.txt", ra);
  char buf[200];
  std::snprintf(
      buf, sizeof buf,
      "%s in %d iterations (K=%d, n_Local_Solv %ld), relres %.3e / true %.3e",
      kr.converged ? "converged" : "NOT converged", kr.iters, K,
      long(kr.iters) * K, kr.relres, kr.true_relres);
  announce(quiet, buf);
  return kr.converged ? 0 : 3;
}

int run_direct(const RunConfig& cfg, const ProblemSetup& st, int threads,
               bool quiet) {
  const auto t0 = std::chrono::steady_clock::now();
  announce(quiet, describe(st, cfg.sigma0));
  const FieldGrid f = sample_source(st.source, st.grid.lattice(),
                                    st.grid.global_window(), st.k_source);
  const FieldGrid u =
      direct_solve_global(st.grid, st.medium, cfg.c_sigma, f.v, cfg.sigma0);
  RunArtifacts ra;
  ra.mode = "direct";
  ra.grid = &st.grid;
  ra.sigma0 = cfg.sigma0;
  ra.threads = threads;
  ra.sweep_len = st.grid.n1 + st.grid.n2;
  ra.relres = 0;
  ra.total_ms = ms_since(t0);
  ra.solve_ms = ra.total_ms;
  write_field_artifacts(cfg, st, u);
  write_resid_csv(cfg.prefix + "_resid.csv", {});
  write_stats(cfg.prefix + "_stats.txt", ra);
  announce(quiet, "direct solve done");
  return 0;
}

GridSpec refine_grid(const GridSpec& g0, int factor) {
  GridSpec g = g0;
  g.mx *= factor;
  g.my *= factor;
  g.h /= factor;
  g.n_overlap *= factor;
  g.n_ramp *= factor;
  return g;
}

int run_convergence(const RunConfig& cfg, const ProblemSetup& st, int threads,
                    bool quiet) {
  const auto t0 = std::chrono::steady_clock::now();
  const bool use_greens = cfg.conv_ref == "greens";
  if (use_greens && st.medium.kind != MediumKind::Constant)
    throw ConfigError("conv.ref=greens needs a constant medium");
  std::vector<double> l2(cfg.conv_levels), h1(cfg.conv_levels);
  FieldGrid finest;
  GridSpec finest_grid;
  double sigma0 = 0, factor_ms = 0, solve_ms = 0;
  std::vector<OpClassInfo> classes;
  int steps_finest = 0;
  bool all_converged = true;
  for (int lev = 0; lev < cfg.conv_levels; ++lev) {
    const GridSpec g = refine_grid(st.grid, 1 << lev);
    DdmConfig dc = engine_config(cfg, st, threads);
    dc.grid = g;
    DdmEngine eng(dc);
    const FieldGrid f = sample_source(st.source, g.lattice(),
                                      g.global_window(), st.k_source);
    DdmStats stats;
    const FieldGrid u =
        eng.solve_iterative(f.v, cfg.tol, cfg.max_steps, stats, cfg.check_every);
    all_converged = all_converged && stats.converged;
    const int e = g.n_ext();
    const Lattice lat = g.lattice();
    ErrorNorms en;
    if (use_greens) {
      if (st.source.kind == SourceKind::PointDelta) {
        const double sx = st.source.x, sy = st.source.y;
        const double k = st.k_source;
        en = error_norms(
            u,
            [&](double x, double y) {
              const double r = std::hypot(x - sx, y - sy);
              return r > 0 ? greens_kernel(k, r) : Complex(0);
            },
            lat, e, e + g.mx, e, e + g.my, st.medium.k_max());
      } else {
        const double k = st.k_source;
        RadialSource rs{16.0 * k * k / (M_PI * M_PI * M_PI), 4.0 * k / M_PI};
        const RadialGreens rg(k, rs);
        const double sx = st.source.x, sy = st.source.y;
        en = error_norms(
            u,
            [&](double x, double y) {
              return rg.eval(std::hypot(x - sx, y - sy));
            },
            lat, e, e + g.mx, e, e + g.my, st.medium.k_max());
      }
    } else {
      const GridSpec gf = refine_grid(g, 2);
      const FieldGrid ff = sample_source(st.source, gf.lattice(),
                                         gf.global_window(), st.k_source);
      const FieldGrid uf =
          direct_solve_global(gf, st.medium, cfg.c_sigma, ff.v, cfg.sigma0);
      const Lattice latf = gf.lattice();
      en = error_norms(
          u,
          [&](double x, double y) {
            const int pf = int(std::lround((x - latf.ox) / latf.h));
            const int qf = int(std::lround((y - latf.oy) / latf.h));
            return uf.at(pf, qf);
          },
          lat, e, e + g.mx, e, e + g.my, st.medium.k_max());
    }
    l2[lev] = en.l2_abs;
    h1[lev] = en.h1_abs;
    char buf[160];
    std::snprintf(buf, sizeof buf, "level %d: %dx%d cells, L2 %.4e, H1 %.4e",
                  lev, g.mx, g.my, en.l2_abs, en.h1_abs);
    announce(quiet, buf);
    if (lev == cfg.conv_levels - 1) {
      finest = u;
      finest_grid = g;
      sigma0 = eng.sigma0();
      classes = eng.class_info();
      steps_finest = stats.steps;
      factor_ms += eng.factor_ms();
      solve_ms += stats.sweep_ms;
      write_resid_csv(cfg.prefix + "_resid.csv", stats.history);
    } else {
      factor_ms += eng.factor_ms();
      solve_ms += stats.sweep_ms;
    }
  }
  std::ofstream csv(cfg.prefix + "_conv.csv");
  if (!csv) throw IoError("cannot open for writing: " + cfg.prefix + "_conv.csv");
  csv << "level,cells_x,cells_y,h,l2_err,l2_rate,h1_err,h1_rate\n";
  for (int lev = 0; lev < cfg.conv_levels; ++lev) {
    const GridSpec g = refine_grid(st.grid, 1 << lev);
    char buf[200];
    if (lev == 0)
      std::snprintf(buf, sizeof buf, "%d,%d,%d,%.9e,%.6e,,%.6e,\n", lev, g.mx,
                    g.my, g.h, l2[lev], h1[lev]);
    else
      std::snprintf(buf, sizeof buf, "%d,%d,%d,%.9e,%.6e,%.3f,%.6e,%.3f\n",
                    lev, g.mx, g.my, g.h, l2[lev],
                    std::log2(l2[lev - 1] / l2[lev]), h1[lev],
                    std::log2(h1[lev - 1] / h1[lev]));
    csv << buf;
  }
  if (!csv) throw IoError("write failed: " + cfg.prefix + "_conv.csv");
  RunArtifacts ra;
  ra.mode = "convergence";
  ra.grid = &finest_grid;
  ra.sigma0 = sigma0;
  ra.threads = threads;
  ra.classes = classes;
  ra.n_ddm_iter = steps_finest;
  ra.sweep_len = finest_grid.n1 + finest_grid.n2;
  ra.relres = 0;
  ra.converged = all_converged;
  ra.factor_ms = factor_ms;
  ra.solve_ms = solve_ms;
  ra.total_ms = ms_since(t0);
  ProblemSetup stf = st;
  stf.grid = finest_grid;
  write_field_artifacts(cfg, stf, finest);
  write_stats(cfg.prefix + "_stats.txt", ra);
  return all_converged ? 0 : 3;
}

int run_render(const CliArgs& args) {
  if (args.pos.size() != 2)
    throw ConfigError("render needs <dump> and <out.ppm>");
  const FieldDump d = read_field_dump(args.pos[0]);
  write_ppm_real(args.pos[1], d.nx, d.ny, d.data, 0);
  announce(args.quiet, "wrote " + args.pos[1]);
  return 0;
}

int dispatch(const CliArgs& args) {
  if (args.help || args.cmd.empty()) {
    std::cout << kUsage;
    return args.help ? 0 : 2;
  }
  if (args.cmd == "render") return run_render(args);
  if (args.cmd != "solve" && args.cmd != "direct" && args.cmd != "convergence")
    throw ConfigError("unknown command: " + args.cmd);
  if (args.pos.size() != 1)
    throw ConfigError(args.cmd + " needs exactly one config file argument");
  RunConfig cfg = parse_config_file(args.pos[0], args.overrides);
  const int threads = env_threads(cfg.threads);
  const ProblemSetup st = make_setup(cfg);
  if (args.cmd == "convergence")
    return run_convergence(cfg, st, threads, args.quiet);
  std::string mode = cfg.mode;
  if (args.cmd == "direct") mode = "direct";
  if (mode == "ddm") return run_ddm(cfg, st, threads, args.quiet);
  if (mode == "fgmres") return run_fgmres(cfg, st, threads, args.quiet);
  return run_direct(cfg, st, threads, args.quiet);
}

}  // namespace

int run_cli(int argc, char** argv) {
  try {
    return dispatch(parse_args(argc, argv));
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const SolveError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return 3;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace helmddm
