#include "agds/boundary.hpp"

#include <cmath>

namespace agds {

namespace {

using V3 = std::array<double, 3>;

V3 cross(const V3& a, const V3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

double dot(const V3& a, const V3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

V3 normalized(V3 v) {
  double s = std::sqrt(dot(v, v));
  for (auto& x : v) x /= s;
  return v;
}

std::vector<Index> boundary_order(const Grid& g) {
  std::vector<Index> order;
  if (g.dim == 2 && g.all_bounded()) {
    const Index nx = g.n[0], ny = g.n[1];
    for (Index i = 0; i < nx; ++i) order.push_back(g.index(i, 0));
    for (Index j = 1; j < ny; ++j) order.push_back(g.index(nx - 1, j));
    for (Index i = nx - 1; i-- > 0;) order.push_back(g.index(i, ny - 1));
    for (Index j = ny - 1; j-- > 1;) order.push_back(g.index(0, j));
    return order;
  }
  for (Index v = 0; v < g.nodes(); ++v) {
    if (g.on_boundary(v)) order.push_back(v);
  }
  return order;
}

}  // namespace

Mat cross_matrix(const std::array<double, 3>& n) {
  Mat m(3, 3);
  m << 0.0, -n[2], n[1],
       n[2], 0.0, -n[0],
       -n[1], n[0], 0.0;
  return m;
}

BoundaryNodes boundary_nodes(const Grid& g) {
  BoundaryNodes b;
  b.node = boundary_order(g);
  const Index m = b.size();
  b.weight = Vec::Zero(m);
  std::array<Vec, 3> w{g.axis_weights(0), g.axis_weights(1), g.axis_weights(2)};
  for (Index q = 0; q < m; ++q) {
    auto c = g.coords(b.node[q]);
    b.position.push_back(g.position(b.node[q]));
    V3 n{0.0, 0.0, 0.0};
    int faces = 0;
    double weight = 0.0;
    for (int a = 0; a < g.dim; ++a) {
      if (!g.is_bounded(a)) continue;
      double sign = 0.0;
      if (c[a] == 0) sign = -1.0;
      else if (c[a] == g.n[a] - 1) sign = 1.0;
      if (sign == 0.0) continue;
      n[a] += sign;
      ++faces;
      double fw = 1.0;
      for (int bax = 0; bax < g.dim; ++bax) {
        if (bax != a) fw *= w[bax][c[bax]];
      }
      weight += fw;
    }
    n = normalized(n);
    b.normal.push_back(n);
    b.weight[q] = weight;
    b.face_interior.push_back(faces == 1);
    V3 t1, t2;
    if (g.dim == 3) {
      int e = 0;
      for (int a = 1; a < 3; ++a) {
        if (std::abs(n[a]) < std::abs(n[e])) e = a;
      }
      V3 ev{0.0, 0.0, 0.0};
      ev[e] = 1.0;
      double proj = dot(ev, n);
      t1 = normalized({ev[0] - proj * n[0], ev[1] - proj * n[1], ev[2] - proj * n[2]});
      t2 = cross(n, t1);
    } else {
      t1 = {-n[1], n[0], 0.0};
      t2 = {0.0, 0.0, 1.0};
    }
    b.t1.push_back(t1);
    b.t2.push_back(t2);
  }
  return b;
}

BoundaryTrace boundary_trace(const Grid& g) {
  BoundaryTrace t;
  t.boundary = boundary_nodes(g);
  const Index m = t.boundary.size();
  t.domain = make_space(g.nodes(), Gram::diagonal(g.node_weights()), "scalar");
  t.l2_boundary = make_space(m, Gram::diagonal(t.boundary.weight), "L2(boundary)");
  std::vector<Triplet> trips;
  for (Index q = 0; q < m; ++q) trips.emplace_back(q, t.boundary.node[q], 1.0);
  SpMat gam(m, g.nodes());
  gam.setFromTriplets(trips.begin(), trips.end());
  t.gamma = LinOp(gam, t.domain, t.l2_boundary);
  return t;
}

SurfaceGradient surface_gradient(const BoundaryTrace& trace) {
  const BoundaryNodes& b = trace.boundary;
  const Index m = b.size();
  if (m < 3) throw ValidationError("surface_gradient needs a closed polyline");
  SurfaceGradient s;
  s.l2_boundary = trace.l2_boundary;
  s.segment_length = Vec(m);
  std::vector<Triplet> trips;
  for (Index q = 0; q < m; ++q) {
    Index next = (q + 1) % m;
    const auto& a = b.position[q];
    const auto& c = b.position[next];
    s.segment_length[q] =
        std::sqrt((c[0] - a[0]) * (c[0] - a[0]) + (c[1] - a[1]) * (c[1] - a[1]) +
                  (c[2] - a[2]) * (c[2] - a[2]));
    trips.emplace_back(q, next, 1.0 / s.segment_length[q]);
    trips.emplace_back(q, q, -1.0 / s.segment_length[q]);
  }
  SpMat d(m, m);
  d.setFromTriplets(trips.begin(), trips.end());
  s.l2_tangential = make_space(m, Gram::diagonal(s.segment_length), "L2tau(boundary)");
  s.grad = LinOp(d, s.l2_boundary, s.l2_tangential);
  return s;
}

TangentialTraces tangential_traces(const Grid& g) {
  if (g.dim != 3) throw ValidationError("tangential_traces requires a 3D grid");
  TangentialTraces t;
  t.boundary = boundary_nodes(g);
  const Index m = t.boundary.size();
  const Index n = g.nodes();
  Vec w = g.node_weights();
  Vec w3(3 * n);
  for (int c = 0; c < 3; ++c) w3.segment(c * n, n) = w;
  t.domain = make_space(3 * n, Gram::diagonal(w3), "vector");
  Vec wt(2 * m);
  wt << t.boundary.weight, t.boundary.weight;
  t.l2_tau = make_space(2 * m, Gram::diagonal(wt), "L2tau(boundary)");

  std::vector<Triplet> pi, gt, nc, sel;
  Index face_count = 0;
  for (Index q = 0; q < m; ++q) {
    const Index v = t.boundary.node[q];
    const auto& t1 = t.boundary.t1[q];
    const auto& t2 = t.boundary.t2[q];
    for (int c = 0; c < 3; ++c) {
      if (t1[c] != 0.0) {
        pi.emplace_back(q, c * n + v, t1[c]);
        gt.emplace_back(m + q, c * n + v, -t1[c]);
      }
      if (t2[c] != 0.0) {
        pi.emplace_back(m + q, c * n + v, t2[c]);
        gt.emplace_back(q, c * n + v, t2[c]);
      }
    }
    nc.emplace_back(q, m + q, -1.0);
    nc.emplace_back(m + q, q, 1.0);
    if (t.boundary.face_interior[q]) ++face_count;
  }
  Index f = 0;
  for (Index q = 0; q < m; ++q) {
    if (!t.boundary.face_interior[q]) continue;
    sel.emplace_back(f, q, 1.0);
    sel.emplace_back(face_count + f, m + q, 1.0);
    ++f;
  }
  SpMat p(2 * m, 3 * n), gm(2 * m, 3 * n), x(2 * m, 2 * m), s(2 * face_count, 2 * m);
  p.setFromTriplets(pi.begin(), pi.end());
  gm.setFromTriplets(gt.begin(), gt.end());
  x.setFromTriplets(nc.begin(), nc.end());
  s.setFromTriplets(sel.begin(), sel.end());
  t.pi_tau = LinOp(p, t.domain, t.l2_tau);
  t.gamma_tau = LinOp(gm, t.domain, t.l2_tau);
  t.n_cross = LinOp(x, t.l2_tau, t.l2_tau);
  t.face_interior_selector = s;
  return t;
}

}  // namespace agds
