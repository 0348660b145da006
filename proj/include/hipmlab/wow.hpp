#pragma once

#include "hipmlab/measures.hpp"
#include "hipmlab/ot1d.hpp"

namespace hipmlab {

// Entry (i1, i2) is the exact W1 between member i1 of q1 and member i2 of q2.
// Rows are computed in parallel. Requires equal member counts.
CostMatrix pairwise_wasserstein_matrix(const EmpiricalLaw& q1, const EmpiricalLaw& q2);

// Wasserstein-over-Wasserstein between two discrete laws with equal member
// counts: the exact assignment value on the pairwise W1 cost matrix.
double wow_distance(const EmpiricalLaw& q1, const EmpiricalLaw& q2);

}  // namespace hipmlab
