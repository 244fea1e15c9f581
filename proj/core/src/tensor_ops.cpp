#include "agds/tensor_ops.hpp"

#include <algorithm>

namespace agds {

Mat pointwise_sym(int dim) {
  const int m = dim * dim;
  Mat s = Mat::Zero(m, m);
  for (int i = 0; i < dim; ++i) {
    for (int k = 0; k < dim; ++k) {
      s(i * dim + k, i * dim + k) += 0.5;
      s(i * dim + k, k * dim + i) += 0.5;
    }
  }
  return s;
}

Mat pointwise_skew(int dim) { return Mat::Identity(dim * dim, dim * dim) - pointwise_sym(dim); }

Mat pointwise_trace_proj(int dim) {
  const int m = dim * dim;
  Mat p = Mat::Zero(m, m);
  for (int i = 0; i < dim; ++i) {
    for (int k = 0; k < dim; ++k) p(i * dim + i, k * dim + k) = 1.0 / dim;
  }
  return p;
}

SpMat lift_pointwise(const Mat& m, Index nodes) {
  return kron(m.sparseView(0.0, 0.0), sparse_identity(nodes));
}

TensorFieldOps tensor_field_ops(const FieldOps& ops) {
  TensorFieldOps t;
  const int d = ops.grid.dim;
  const Index n = ops.grid.nodes();
  t.dim = d;
  t.scalar = ops.scalar;
  t.tensor = ops.tensor;
  t.sym = LinOp(lift_pointwise(pointwise_sym(d), n), t.tensor, t.tensor);
  t.skew = LinOp(lift_pointwise(pointwise_skew(d), n), t.tensor, t.tensor);
  Mat tr = Mat::Zero(1, d * d);
  for (int i = 0; i < d; ++i) tr(0, i * d + i) = 1.0;
  t.trace = LinOp(lift_pointwise(tr, n), t.tensor, t.scalar);
  t.trace_adj = gram_adjoint(t.trace);
  t.trace_proj = (1.0 / d) * compose(t.trace_adj, t.trace);
  t.sym0 = t.sym - t.trace_proj;
  t.identity = identity_op(t.tensor);
  return t;
}

double TensorIdentityReport::max() const {
  return std::max({sym0_identity, trace_identity, skew_identity, curl_curl_identity, partition});
}

TensorIdentityReport tensor_identity_check(const FieldOps& ops) {
  if (ops.grid.dim != 3) throw ValidationError("tensor_identity_check requires a 3D grid");
  TensorFieldOps t = tensor_field_ops(ops);
  auto sandwich = [&](const LinOp& m) {
    return compose(ops.tensor_div, compose(m, ops.tensor_grad)).coeffs();
  };
  const SpMat& cc = ops.curl_curl.coeffs();
  const SpMat& gd = ops.grad_div.coeffs();
  TensorIdentityReport r;
  r.sym0_identity = max_rel_diff(sandwich(t.sym0), SpMat(-0.5 * cc + (2.0 / 3.0) * gd));
  r.trace_identity = max_rel_diff(sandwich(t.trace_proj), SpMat((1.0 / 3.0) * gd));
  r.skew_identity = max_rel_diff(sandwich(t.skew), SpMat(-0.5 * cc));
  r.curl_curl_identity = max_rel_diff(cc, SpMat(gd - ops.vector_laplacian.coeffs()));
  r.partition = max_rel_diff(SpMat(t.sym0.coeffs() + t.trace_proj.coeffs() + t.skew.coeffs()),
                             t.identity.coeffs());
  return r;
}

}  // namespace agds
