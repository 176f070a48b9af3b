#pragma once

#include <functional>

#include "helmddm/types.hpp"

namespace helmddm {

using LinearOp = std::function<void(const Complex*, Complex*)>;

struct FgmresOptions {
  double tol = 1e-6;
  int max_iters = 200;
  int restart = 0;  // 0 = no restart
};

struct FgmresResult {
  int iters = 0;
  bool converged = false;
  double relres = -1;       // recursive estimate at exit
  double true_relres = -1;  // recomputed from the returned x
  std::vector<double> history;  // recursive relres per iteration
  std::vector<double> iter_ms;  // wall time per iteration
};

/// Right-preconditioned flexible GMRES with modified Gram-Schmidt and Givens
/// rotations; full recurrence by default, cyclic restart if requested. The
/// preconditioner may change between iterations; its outputs are stored and
/// combined for the solution. Starts from x = 0. Pass a null M for the
/// unpreconditioned iteration.
FgmresResult fgmres(size_t n, const LinearOp& A, const LinearOp& M,
                    const std::vector<Complex>& b, std::vector<Complex>& x,
                    const FgmresOptions& opt);

}  // namespace helmddm
