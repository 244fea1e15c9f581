#include "agds/calculus.hpp"

#include <cmath>

namespace agds {

namespace {

Vec repeat(const Vec& w, int times) {
  Vec out(w.size() * times);
  for (int c = 0; c < times; ++c) out.segment(c * w.size(), w.size()) = w;
  return out;
}

}  // namespace

FieldOps field_ops(const Grid& grid) {
  FieldOps ops;
  ops.grid = grid;
  const int d = grid.dim;
  const Index n = grid.nodes();
  Vec w = grid.node_weights();
  ops.scalar = make_space(n, Gram::diagonal(w), "scalar");
  ops.vector = make_space(d * n, Gram::diagonal(repeat(w, d)), "vector");
  ops.tensor = make_space(d * d * n, Gram::diagonal(repeat(w, d * d)), "tensor");

  for (int a = 0; a < d; ++a) {
    SpMat d1 = grid.topology[a] == Topology::periodic
                   ? central_difference_1d(grid.n[a], grid.h(a))
                   : sbp_difference_1d(grid.n[a], grid.h(a));
    ops.partial.push_back(along_axis(grid, a, d1));
  }
  const auto& p = ops.partial;

  ops.grad = LinOp(vstack(p), ops.scalar, ops.vector);
  ops.div = LinOp(hstack(p), ops.vector, ops.scalar);
  SpMat lap(n, n);
  for (int a = 0; a < d; ++a) lap += p[a] * p[a];
  ops.laplacian = LinOp(lap, ops.scalar, ops.scalar);
  std::vector<SpMat> lap_blocks(d, lap);
  ops.vector_laplacian = LinOp(block_diag(lap_blocks), ops.vector, ops.vector);
  ops.grad_div = compose(ops.grad, ops.div);

  if (d == 3) {
    SpMat z(n, n);
    SpMat curl = vstack({hstack({z, SpMat(-p[2]), p[1]}),
                         hstack({p[2], z, SpMat(-p[0])}),
                         hstack({SpMat(-p[1]), p[0], z})});
    ops.curl = LinOp(curl, ops.vector, ops.vector);
    ops.curl_curl = compose(ops.curl, ops.curl);
  }

  // (grad phi)_{ik} = d_k phi_i sits in block d*i + k.
  std::vector<SpMat> grad_rows;
  for (int i = 0; i < d; ++i) {
    for (int k = 0; k < d; ++k) {
      std::vector<SpMat> row(d, SpMat(n, n));
      row[i] = p[k];
      grad_rows.push_back(hstack(row));
    }
  }
  ops.tensor_grad = LinOp(vstack(grad_rows), ops.vector, ops.tensor);

  std::vector<SpMat> div_rows;
  for (int i = 0; i < d; ++i) {
    std::vector<SpMat> row(d * d, SpMat(n, n));
    for (int k = 0; k < d; ++k) row[d * i + k] = p[k];
    div_rows.push_back(hstack(row));
  }
  ops.tensor_div = LinOp(vstack(div_rows), ops.tensor, ops.vector);
  return ops;
}

FieldOps periodic_ops(const Grid& grid) {
  if (!grid.all_periodic()) throw ValidationError("periodic_ops requires a fully periodic grid");
  return field_ops(grid);
}

SpMat interior_projection(const Grid& grid, int components) {
  Vec mask(grid.nodes());
  for (Index i = 0; i < grid.nodes(); ++i) mask[i] = grid.on_boundary(i) ? 0.0 : 1.0;
  return sparse_diag(repeat(mask, components));
}

DirichletPair dirichlet_pair(const Grid& grid) {
  if (!grid.all_bounded()) throw ValidationError("dirichlet_pair requires a bounded grid");
  const int d = grid.dim;
  double cell = 1.0;
  for (int a = 0; a < d; ++a) cell *= grid.h(a);
  DirichletPair out;
  out.nodes = make_space(grid.nodes(), Gram::diagonal(Vec::Constant(grid.nodes(), cell)), "nodes");
  std::vector<SpMat> blocks;
  for (int a = 0; a < d; ++a) {
    blocks.push_back(along_axis(grid, a, forward_difference_1d(grid.n[a], grid.h(a))));
  }
  SpMat fwd = vstack(blocks);
  out.edges = make_space(fwd.rows(), Gram::diagonal(Vec::Constant(fwd.rows(), cell)), "edges");
  SpMat proj = interior_projection(grid, 1);
  out.interior = LinOp(proj, out.nodes, out.nodes);
  out.grad = LinOp(SpMat((fwd * proj).pruned(0.0, 0.0)), out.nodes, out.edges);
  out.div = -1.0 * gram_adjoint(out.grad);
  return out;
}

}  // namespace agds
