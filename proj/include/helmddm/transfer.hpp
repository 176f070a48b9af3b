#pragma once

#include "helmddm/discretize.hpp"
#include "helmddm/partition.hpp"
#include "helmddm/types.hpp"

namespace helmddm {

/// Inclusive global-index bounding box of the nodes a transfer can touch:
/// the taper band hugging the receiving cut, clipped to the target window
/// interior. Edge directions span the window's full transverse interior;
/// corner directions cover the overlap square at the shared corner.
struct PatchBox {
  int p0 = 0, p1 = -1, q0 = 0, q1 = -1;
  bool empty() const { return p1 < p0 || q1 < q0; }
};

PatchBox transfer_patch(Dir d, const SubdomainWindow& tgt, int n_overlap);

struct TransferScratch {
  std::vector<Complex> w;
};

/// Accumulates the transfer source for one incoming direction into acc
/// (defined on the target window): acc -= L_tgt(beta_d * v) on the receiving
/// band, where v is the source subdomain's field, read as zero outside its
/// window. acc lives in L-form units (like a forcing density).
void add_transfer(Dir d, const DiscreteOperator& op_t,
                  const SubdomainWindow& tgt, int n_overlap, const FieldGrid& v,
                  FieldGrid& acc, TransferScratch& scratch);

}  // namespace helmddm
