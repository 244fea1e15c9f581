#pragma once

#include "agds/calculus.hpp"

namespace agds {

/// Pointwise tensor algebra lifted to tensor fields on a grid.
struct TensorFieldOps {
  int dim = 3;
  SpacePtr scalar;
  SpacePtr tensor;
  LinOp sym;          ///< (T + T^T) / 2
  LinOp skew;         ///< (T - T^T) / 2
  LinOp trace;        ///< tensor -> scalar
  LinOp trace_adj;    ///< scalar -> tensor, s -> s I
  LinOp trace_proj;   ///< (1/dim) trace^* trace
  LinOp sym0;         ///< sym - trace_proj
  LinOp identity;
};

TensorFieldOps tensor_field_ops(const FieldOps& ops);

/// Pointwise dim^2 x dim^2 matrices acting on one tensor (row-major i*dim+k).
Mat pointwise_sym(int dim);
Mat pointwise_skew(int dim);
Mat pointwise_trace_proj(int dim);

/// Lifts a pointwise matrix acting on the components of a field to the grid.
SpMat lift_pointwise(const Mat& m, Index nodes);

/// Residuals of the vector-calculus identities relating the tensor
/// projections to curl curl and grad div.
struct TensorIdentityReport {
  double sym0_identity = 0.0;      ///< div sym0 grad = -1/2 curl curl + 2/3 grad div
  double trace_identity = 0.0;     ///< div P grad = 1/3 grad div
  double skew_identity = 0.0;      ///< div skew grad = -1/2 curl curl
  double curl_curl_identity = 0.0; ///< curl curl = grad div - laplacian
  double partition = 0.0;          ///< sym0 + P + skew = id
  double max() const;
};

TensorIdentityReport tensor_identity_check(const FieldOps& ops);

}  // namespace agds
