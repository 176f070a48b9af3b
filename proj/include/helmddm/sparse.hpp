#pragma once

#include <memory>
#include <mutex>

#include "helmddm/types.hpp"

namespace helmddm {

/// Square sparse matrix in CSR form. Column indices within a row are in
/// ascending order.
struct SparseMatrix {
  int n = 0;
  std::vector<int> row_ptr;  // size n + 1
  std::vector<int> col;
  std::vector<Complex> val;

  void multiply(const Complex* x, Complex* y) const;
  size_t nnz() const { return col.size(); }
};

/// Elimination order for an nx-by-ny grid with 5-point connectivity and
/// decoupled boundary ring: ring first, then recursive bisection of the
/// interior with the separator line eliminated after both halves. Returns
/// order[k] = node index (q * nx + p) eliminated k-th.
std::vector<int> grid_nd_order(int nx, int ny);

struct LdltData;
struct EigenLuData;

/// Direct factorization of a structurally symmetric matrix. With an
/// elimination order it runs a no-pivot symmetric (unconjugated) LDL^T and
/// verifies it with a probe solve, falling back to a pivoting LU if the
/// factorization breaks down or the probe is inaccurate. An empty order
/// selects the LU backend directly. Solves apply iterative refinement and
/// serialize internally, so one factorization may be shared across threads.
class Factorization {
 public:
  Factorization();
  ~Factorization();
  Factorization(const Factorization&) = delete;
  Factorization& operator=(const Factorization&) = delete;

  void factor(SparseMatrix A, std::vector<int> order);

  void solve(const Complex* b, Complex* x) const;
  void solve(const std::vector<Complex>& b, std::vector<Complex>& x) const;

  const SparseMatrix& matrix() const { return A_; }
  const char* backend() const { return ldlt_ ? "ldlt" : "lu"; }
  size_t factor_nonzeros() const;
  double probe_relres() const { return probe_relres_; }

 private:
  void solve_raw(const Complex* b, Complex* x) const;
  double refine(const Complex* b, Complex* x) const;
  void build_eigen();

  SparseMatrix A_;
  std::unique_ptr<LdltData> ldlt_;
  std::unique_ptr<EigenLuData> lu_;
  double probe_relres_ = 0;
  mutable std::mutex mu_;
  mutable std::vector<Complex> work_, resid_, corr_;
};

}  // namespace helmddm
