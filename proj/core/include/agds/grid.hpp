#pragma once

#include <array>

#include "agds/operator_core.hpp"

namespace agds {

enum class Topology { periodic, bounded };

/// Tensor-product node grid on [0, length]^dim. Periodic axes carry n nodes
/// with spacing length/n, bounded axes carry n nodes including both ends.
/// Node index: i + n0 * (j + n1 * k).
struct Grid {
  int dim = 3;
  std::array<Index, 3> n{1, 1, 1};
  std::array<Topology, 3> topology{Topology::periodic, Topology::periodic, Topology::periodic};
  double length = 1.0;

  static Grid periodic(int dim, Index n, double length = 1.0);
  static Grid bounded(int dim, Index nodes, double length = 1.0);
  /// Bounded in x, periodic in y and z.
  static Grid slab(Index nodes_x, Index nodes_tangential, double length = 1.0);

  Index nodes() const { return n[0] * n[1] * n[2]; }
  bool is_bounded(int axis) const { return axis < dim && topology[axis] == Topology::bounded; }
  bool all_periodic() const;
  bool all_bounded() const;
  double h(int axis) const;
  Index index(Index i, Index j = 0, Index k = 0) const { return i + n[0] * (j + n[1] * k); }
  std::array<Index, 3> coords(Index node) const;
  std::array<double, 3> position(Index node) const;

  /// Quadrature weights along one axis (uniform if periodic, trapezoid if bounded).
  Vec axis_weights(int axis) const;
  /// Tensor-product quadrature weights of the nodes.
  Vec node_weights() const;
  /// Number of bounded axes along which the node sits on an end.
  int boundary_multiplicity(Index node) const;
  bool on_boundary(Index node) const { return boundary_multiplicity(node) > 0; }
};

/// 1D difference matrices along one axis.
SpMat central_difference_1d(Index n, double h);   ///< periodic centred difference
SpMat sbp_difference_1d(Index n, double h);       ///< centred inside, one-sided ends
SpMat forward_difference_1d(Index n, double h);   ///< n nodes -> n-1 edges
/// Lifts a 1D matrix acting along one axis to the full node grid.
SpMat along_axis(const Grid& g, int axis, const SpMat& m1d);

}  // namespace agds
