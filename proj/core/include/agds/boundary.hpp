#pragma once

#include <array>
#include <vector>

#include "agds/grid.hpp"

namespace agds {

/// Boundary nodes of a grid with outward normals and surface weights.
/// Normals at edges and corners are the normalized sum of the adjacent face
/// normals. For a 2D box the nodes are ordered counter-clockwise, forming a
/// closed polyline.
struct BoundaryNodes {
  std::vector<Index> node;                    ///< grid node index
  std::vector<std::array<double, 3>> position;
  std::vector<std::array<double, 3>> normal;
  std::vector<std::array<double, 3>> t1;      ///< t1 x t2 = normal
  std::vector<std::array<double, 3>> t2;
  Vec weight;                                 ///< surface quadrature weight
  std::vector<bool> face_interior;            ///< exactly one bounded axis at an end
  Index size() const { return static_cast<Index>(node.size()); }
};

BoundaryNodes boundary_nodes(const Grid& grid);

/// Trace operator gamma : L2(grid) -> L2(boundary nodes).
struct BoundaryTrace {
  BoundaryNodes boundary;
  SpacePtr domain;
  SpacePtr l2_boundary;
  LinOp gamma;
};

BoundaryTrace boundary_trace(const Grid& grid);

/// Surface gradient along the closed polyline of a 2D bounded grid: periodic
/// forward difference from boundary nodes to boundary segments. Requires the
/// counter-clockwise node order of a 2D box.
struct SurfaceGradient {
  SpacePtr l2_boundary;
  SpacePtr l2_tangential;
  LinOp grad;
  Vec segment_length;
};

SurfaceGradient surface_gradient(const BoundaryTrace& trace);

/// Tangential traces of 3-vector fields. Tangential fields are stored with
/// two coordinates (along t1 and t2) per boundary node, blocked as
/// [coordinate 1 of all nodes; coordinate 2 of all nodes].
struct TangentialTraces {
  BoundaryNodes boundary;
  SpacePtr domain;        ///< 3-vector fields with node weights
  SpacePtr l2_tau;
  LinOp pi_tau;           ///< gamma H - (n . gamma H) n
  LinOp gamma_tau;        ///< gamma E x n
  LinOp n_cross;          ///< n x on tangential fields
  /// Restriction to face-interior boundary nodes of a tangential field.
  SpMat face_interior_selector;
};

TangentialTraces tangential_traces(const Grid& grid);

/// Pointwise 3x3 matrix of v -> n x v.
Mat cross_matrix(const std::array<double, 3>& n);

}  // namespace agds
