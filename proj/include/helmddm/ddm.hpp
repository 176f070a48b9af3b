#pragma once

#include <memory>

#include "helmddm/discretize.hpp"
#include "helmddm/medium.hpp"
#include "helmddm/partition.hpp"
#include "helmddm/sparse.hpp"
#include "helmddm/threads.hpp"
#include "helmddm/transfer.hpp"
#include "helmddm/types.hpp"

namespace helmddm {

struct DdmConfig {
  GridSpec grid;
  MediumModel medium;
  double c_sigma = 25.0;
  double sigma0 = 0;     // > 0 overrides the c_sigma-derived plateau
  bool force_lu = false; // skip the symmetric factorization path
  int threads = 1;
};

struct StepRecord {
  int step = 0;
  double relres = 0;
  double wall_ms = 0;
};

struct DdmStats {
  int steps = 0;
  long solves = 0;   // local solves performed
  long skipped = 0;  // solves skipped because the gathered source was zero
  double relres = -1;
  bool converged = false;
  double factor_ms = 0;
  double sweep_ms = 0;
  std::vector<StepRecord> history;
};

struct OpClassInfo {
  int members = 0;
  const char* backend = "";
  size_t factor_nnz = 0;
  double probe_relres = 0;
};

/// Additive overlapping decomposition of the absorbing-window Helmholtz
/// problem. Each sweep solves every subdomain against sources gathered from
/// its neighbors' previous fields (edge neighbors one step back, corner
/// neighbors two) and folds the blended result into a running global field.
/// Subdomains with identical coefficient arrays share one factorization.
class DdmEngine {
 public:
  explicit DdmEngine(const DdmConfig& cfg);

  const Partition& partition() const { return part_; }
  const GridSpec& grid() const { return part_.g; }
  const DiscreteOperator& global_op() const { return gop_; }
  double sigma0() const { return sigma0_; }
  size_t n_global() const { return gop_.k2.size(); }
  double factor_ms() const { return factor_ms_; }
  std::vector<OpClassInfo> class_info() const;

  /// out = L u on the global window (identity on the boundary ring).
  void apply_global(const Complex* u, Complex* out) const;

  /// Runs sweeps until the global relative residual drops to tol or
  /// max_steps is exhausted; f is in L-form units on the global window.
  /// The residual is evaluated every check_every steps (and at the last);
  /// evaluated steps land in the stats history.
  FieldGrid solve_iterative(const std::vector<Complex>& f, double tol,
                            int max_steps, DdmStats& stats,
                            int check_every = 1);

  /// K-sweep application z = M(r) with no convergence checks; solve counts
  /// accumulate into stats across calls.
  void precondition(const Complex* r, Complex* z, int ksteps, DdmStats& stats);

 private:
  struct OpClass {
    DiscreteOperator op;
    Factorization fact;
    int members = 0;
  };

  void build_classes();
  void reset_state();
  void sweep(int s, const Complex* f, DdmStats& st);
  bool restrict_owned(long t, const Complex* f, FieldGrid& rhs) const;
  void accumulate_weighted(long t);
  double residual_norm(const Complex* f) const;

  DdmConfig cfg_;
  Partition part_;
  double sigma0_ = 0;
  double factor_ms_ = 0;
  DiscreteOperator gop_;
  std::vector<std::unique_ptr<OpClass>> classes_;
  std::vector<int> class_of_;
  std::vector<std::array<int, 4>> owned_;  // per-sub owned rect, global nodes
  WorkerPool pool_;

  std::vector<FieldGrid> curr_, prev1_, prev2_, rhs_;
  std::vector<char> zc_, zp1_, zp2_;   // all-zero flags per buffer
  std::vector<TransferScratch> scratch_;
  std::vector<Complex> assembled_;
  mutable std::vector<Complex> tmp_;
};

}  // namespace helmddm
