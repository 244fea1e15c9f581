#pragma once

#include "agds/grid.hpp"

namespace agds {

/// Collocated differential operators on a node grid. Vector fields are
/// stored component-major ([phi_1; phi_2; phi_3]); tensor fields store
/// sigma_ik in block 3i+k (dim*i+k in lower dimension).
struct FieldOps {
  Grid grid;
  SpacePtr scalar;
  SpacePtr vector;
  SpacePtr tensor;
  std::vector<SpMat> partial;   ///< one derivative matrix per axis
  LinOp grad;                   ///< scalar -> vector
  LinOp div;                    ///< vector -> scalar, sum of partial derivatives
  LinOp laplacian;              ///< sum of squared partial derivatives
  LinOp vector_laplacian;
  LinOp grad_div;
  LinOp curl;                   ///< only for dim == 3
  LinOp curl_curl;
  LinOp tensor_grad;            ///< vector -> tensor, (d_k phi_i)_{ik}
  LinOp tensor_div;             ///< tensor -> vector, row-wise divergence
};

/// Periodic axes use centred differences, bounded axes the summation-by-parts
/// difference with trapezoid weights. Grams are the node quadrature weights.
FieldOps field_ops(const Grid& grid);

/// field_ops restricted to fully periodic grids.
FieldOps periodic_ops(const Grid& grid);

/// Gradient with homogeneous Dirichlet condition and its negative adjoint on
/// a bounded grid: nodes -> staggered edges, uniform Grams h^dim.
struct DirichletPair {
  SpacePtr nodes;
  SpacePtr edges;
  LinOp grad;        ///< forward difference after zeroing boundary nodes
  LinOp div;         ///< -grad^*, backward-difference divergence at interior nodes
  LinOp interior;    ///< projection zeroing boundary node values
};

DirichletPair dirichlet_pair(const Grid& grid);

/// Diagonal projection zeroing the boundary nodes of every component.
SpMat interior_projection(const Grid& grid, int components);

}  // namespace agds
