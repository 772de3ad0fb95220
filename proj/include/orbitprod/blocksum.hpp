#pragma once

#include <vector>

#include "orbitprod/exact.hpp"
#include "orbitprod/model.hpp"
#include "orbitprod/spectral.hpp"

namespace orbitprod {

/// Intersection-closed collection of index blocks with inclusion-exclusion
/// weights satisfying sum_{B' >= B} w_{B'} = 1 for every member B.
struct BlockFamily {
  std::vector<std::vector<int>> blocks;  // each sorted, distinct, nonempty
  std::vector<long long> weights;
  int coverage_length = 0;  // orbits shorter than this lie in some block
  int ground_size = 0;
};

/// Closes `blocks` under pairwise intersection, drops empty and duplicate
/// sets, then weights maximal blocks 1 and every other block
/// 1 - sum of the weights of its strict supersets.
BlockFamily close_and_weight(std::vector<std::vector<int>> blocks, int ground_size,
                             int coverage_length = 0);

/// L x L windows at stride L/2 over a rows x cols grid (wrapping when
/// periodic), closed under intersection. For a full stride pattern this is
/// the L x L, L x L/2, L/2 x L, L/2 x L/2 family with weights 1, -1, -1, 1.
BlockFamily grid_block_family(int rows, int cols, int L, bool periodic);

/// Maps every vertex block to the arcs with both endpoints inside it.
BlockFamily induced_edge_family(const BlockFamily& node_family, const ArcIndex& index);

/// True when sum_{B' >= B} w_{B'} == 1 for every block B.
bool weight_identity_holds(const BlockFamily& family);

/// True when `items` is a subset of some block.
bool covered_by_family(const BlockFamily& family, std::vector<int> items);

/// sum_B w_B * (-log det(I - A_B)) over principal submatrices.
double log_z_blocks(const SparseMatrix& a, const BlockFamily& family,
                    Eigen::Index budget = kDenseBudget);

/// rho^L / (L (1 - rho)).
double blocksum_error_bound(double rho, int L);

}  // namespace orbitprod
