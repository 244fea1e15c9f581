#pragma once

#include "agds/grid.hpp"

namespace agds {

/// Whether K is formally self-adjoint (<Ku|v> = <u|Kv>) or formally
/// skew-adjoint (<Ku|v> = -<u|Kv>) for u in the interior subspace V_0.
enum class FormalSymmetry { self_adjoint, skew_adjoint };

/// Graph-orthogonal complement of V_0 inside the domain of K, with the
/// induced operator on it.
struct BoundaryDataSpace {
  LinOp k;
  FormalSymmetry symmetry = FormalSymmetry::self_adjoint;
  Mat v0;            ///< basis of V_0 (columns)
  Mat graph_gram;    ///< G + K^T G K
  Mat basis;         ///< graph-orthonormal basis of the complement (columns)
  Mat bullet;        ///< iota^* K iota in the orthonormal basis
  SpacePtr space;    ///< the complement with the identity Gram
  LinOp iota_star;   ///< X -> BD, orthogonal projection coordinates
  LinOp iota;        ///< BD -> X, canonical embedding
  double formal_symmetry_defect = 0.0;

  Index dim() const { return basis.cols(); }
};

/// Builds the boundary data space of K relative to V_0. Throws WitnessError
/// when K is not formally (skew-)self-adjoint on V_0 within tol.
BoundaryDataSpace bd_space(const LinOp& k, const Mat& v0, FormalSymmetry symmetry,
                           double tol = 1e-10);

struct BoundaryDataReport {
  Index dim = 0;
  double orthonormality = 0.0;     ///< |B^T G_graph B - I|
  double complement = 0.0;         ///< |V_0^T G_graph B|
  double bullet_square = 0.0;      ///< |bullet^2 - s I|, s = -1 (self-adjoint K) or +1
  double bullet_skew = 0.0;        ///< |bullet^T + bullet| (self-adjoint K) or |bullet^T - bullet|
  double invariance = 0.0;         ///< graph distance of K(BD) from BD, relative
};

BoundaryDataReport bd_report(const BoundaryDataSpace& bd);

/// Coordinate subspace V_0 spanned by the standard basis vectors whose
/// index is flagged true.
Mat coordinate_subspace(const std::vector<bool>& keep);

/// V_0 for the curl on a grid with bounded axes: all fields whose tangential
/// components vanish on the outermost node layer.
Mat curl_interior_subspace(const Grid& grid);

/// V_0 for a scalar derivative: fields vanishing on the outermost node layer.
Mat scalar_interior_subspace(const Grid& grid);

/// Compares the boundary pairing <bullet iota^* E | iota^* H> with the
/// discrete Green form <K E|H> - <E|K H> and with the surface quadrature of
/// (n x E) . H.
struct BoundaryPairingReport {
  double bullet_pairing = 0.0;
  double green_pairing = 0.0;
  double surface_pairing = 0.0;
  double discrepancy = 0.0;       ///< |bullet - surface|
  double green_discrepancy = 0.0; ///< |green - surface|
};

BoundaryPairingReport bd_identification_check(const BoundaryDataSpace& bd, const Grid& grid,
                                              const Vec& e, const Vec& h);

}  // namespace agds
