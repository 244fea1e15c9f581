#include "agds/grid.hpp"

#include <sstream>

namespace agds {

Grid Grid::periodic(int dim, Index n, double length) {
  if (dim < 1 || dim > 3) throw ValidationError("grid dimension must be 1, 2 or 3");
  if (n < 3) throw ValidationError("periodic grid needs at least 3 nodes per axis");
  Grid g;
  g.dim = dim;
  g.length = length;
  for (int a = 0; a < dim; ++a) {
    g.n[a] = n;
    g.topology[a] = Topology::periodic;
  }
  return g;
}

Grid Grid::bounded(int dim, Index nodes, double length) {
  if (dim < 1 || dim > 3) throw ValidationError("grid dimension must be 1, 2 or 3");
  if (nodes < 3) throw ValidationError("bounded grid needs at least 3 nodes per axis");
  Grid g;
  g.dim = dim;
  g.length = length;
  for (int a = 0; a < dim; ++a) {
    g.n[a] = nodes;
    g.topology[a] = Topology::bounded;
  }
  return g;
}

Grid Grid::slab(Index nodes_x, Index nodes_tangential, double length) {
  if (nodes_x < 3 || nodes_tangential < 3) throw ValidationError("slab grid needs at least 3 nodes per axis");
  Grid g;
  g.dim = 3;
  g.length = length;
  g.n = {nodes_x, nodes_tangential, nodes_tangential};
  g.topology = {Topology::bounded, Topology::periodic, Topology::periodic};
  return g;
}

bool Grid::all_periodic() const {
  for (int a = 0; a < dim; ++a) {
    if (topology[a] != Topology::periodic) return false;
  }
  return true;
}

bool Grid::all_bounded() const {
  for (int a = 0; a < dim; ++a) {
    if (topology[a] != Topology::bounded) return false;
  }
  return true;
}

double Grid::h(int axis) const {
  if (axis >= dim) return 1.0;
  return topology[axis] == Topology::periodic ? length / static_cast<double>(n[axis])
                                              : length / static_cast<double>(n[axis] - 1);
}

std::array<Index, 3> Grid::coords(Index node) const {
  return {node % n[0], (node / n[0]) % n[1], node / (n[0] * n[1])};
}

std::array<double, 3> Grid::position(Index node) const {
  auto c = coords(node);
  std::array<double, 3> p{0.0, 0.0, 0.0};
  for (int a = 0; a < dim; ++a) p[a] = h(a) * static_cast<double>(c[a]);
  return p;
}

Vec Grid::axis_weights(int axis) const {
  if (axis >= dim) return Vec::Ones(1);
  Vec w = Vec::Constant(n[axis], h(axis));
  if (topology[axis] == Topology::bounded) {
    w[0] *= 0.5;
    w[n[axis] - 1] *= 0.5;
  }
  return w;
}

Vec Grid::node_weights() const {
  Vec wx = axis_weights(0), wy = axis_weights(1), wz = axis_weights(2);
  Vec w(nodes());
  for (Index k = 0; k < n[2]; ++k) {
    for (Index j = 0; j < n[1]; ++j) {
      for (Index i = 0; i < n[0]; ++i) w[index(i, j, k)] = wx[i] * wy[j] * wz[k];
    }
  }
  return w;
}

int Grid::boundary_multiplicity(Index node) const {
  auto c = coords(node);
  int m = 0;
  for (int a = 0; a < dim; ++a) {
    if (topology[a] == Topology::bounded && (c[a] == 0 || c[a] == n[a] - 1)) ++m;
  }
  return m;
}

SpMat central_difference_1d(Index n, double h) {
  std::vector<Triplet> t;
  for (Index i = 0; i < n; ++i) {
    t.emplace_back(i, (i + 1) % n, 0.5 / h);
    t.emplace_back(i, (i + n - 1) % n, -0.5 / h);
  }
  SpMat d(n, n);
  d.setFromTriplets(t.begin(), t.end());
  return d;
}

SpMat sbp_difference_1d(Index n, double h) {
  std::vector<Triplet> t;
  t.emplace_back(0, 0, -1.0 / h);
  t.emplace_back(0, 1, 1.0 / h);
  for (Index i = 1; i + 1 < n; ++i) {
    t.emplace_back(i, i + 1, 0.5 / h);
    t.emplace_back(i, i - 1, -0.5 / h);
  }
  t.emplace_back(n - 1, n - 1, 1.0 / h);
  t.emplace_back(n - 1, n - 2, -1.0 / h);
  SpMat d(n, n);
  d.setFromTriplets(t.begin(), t.end());
  return d;
}

SpMat forward_difference_1d(Index n, double h) {
  std::vector<Triplet> t;
  for (Index i = 0; i + 1 < n; ++i) {
    t.emplace_back(i, i, -1.0 / h);
    t.emplace_back(i, i + 1, 1.0 / h);
  }
  SpMat d(n - 1, n);
  d.setFromTriplets(t.begin(), t.end());
  return d;
}

SpMat along_axis(const Grid& g, int axis, const SpMat& m1d) {
  SpMat ix = sparse_identity(g.n[0]), iy = sparse_identity(g.n[1]), iz = sparse_identity(g.n[2]);
  switch (axis) {
    case 0: return kron(iz, kron(iy, m1d));
    case 1: return kron(iz, kron(m1d, ix));
    case 2: return kron(m1d, kron(iy, ix));
    default: throw ValidationError("axis out of range");
  }
}

}  // namespace agds
