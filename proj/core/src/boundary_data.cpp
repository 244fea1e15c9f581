#include "agds/boundary_data.hpp"

#include <Eigen/QR>

#include <cmath>
#include <sstream>

#include "agds/boundary.hpp"

namespace agds {

namespace {

Mat orthonormalize(const Mat& b, const Mat& gram) {
  Mat out = b;
  for (int pass = 0; pass < 2; ++pass) {
    Mat m = out.transpose() * gram * out;
    m = 0.5 * (m + m.transpose()).eval();
    Eigen::LLT<Mat> llt(m);
    if (llt.info() != Eigen::Success) throw ValidationError("bd_space: degenerate complement basis");
    Mat lt = llt.matrixU();
    out = lt.transpose().triangularView<Eigen::Lower>().solve(out.transpose()).transpose();
  }
  return out;
}

}  // namespace

BoundaryDataSpace bd_space(const LinOp& k, const Mat& v0, FormalSymmetry symmetry, double tol) {
  const Index n = k.cols();
  if (k.rows() != n) throw ValidationError("bd_space: K must map a space into itself");
  if (v0.rows() != n) throw ValidationError("bd_space: V_0 basis has the wrong length");

  BoundaryDataSpace bd;
  bd.k = k;
  bd.symmetry = symmetry;
  bd.v0 = v0;
  const Mat g = k.dom()->gram.to_dense();
  const SpMat& ks = k.coeffs();
  const double sign = symmetry == FormalSymmetry::self_adjoint ? 1.0 : -1.0;

  Mat kv = ks * v0;
  Mat defect = kv.transpose() * g - sign * (v0.transpose() * g) * ks;
  double scale = std::max(max_abs(ks) * g.cwiseAbs().maxCoeff(), 1e-300);
  Index wi = 0, wj = 0;
  double worst = v0.cols() > 0 ? defect.cwiseAbs().maxCoeff(&wi, &wj) / scale : 0.0;
  bd.formal_symmetry_defect = worst;
  if (worst > tol) {
    std::ostringstream os;
    os << "bd_space: K is not formally "
       << (symmetry == FormalSymmetry::self_adjoint ? "self-adjoint" : "skew-adjoint")
       << " on V_0, defect " << worst << " at V_0 basis vector " << wi
       << " against coordinate " << wj;
    throw WitnessError(os.str(), worst, static_cast<long>(wi));
  }

  SpMat ktgk = ks.transpose() * k.dom()->gram.to_sparse() * ks;
  bd.graph_gram = g + Mat(ktgk);
  bd.graph_gram = 0.5 * (bd.graph_gram + bd.graph_gram.transpose()).eval();

  Mat gv = bd.graph_gram * v0;
  Eigen::ColPivHouseholderQR<Mat> qr(gv);
  const Index rank = v0.cols() > 0 ? qr.rank() : 0;
  Mat q = qr.householderQ();
  Mat complement = q.rightCols(n - rank);
  bd.basis = orthonormalize(complement, bd.graph_gram);
  bd.bullet = bd.basis.transpose() * bd.graph_gram * (ks * bd.basis);

  const Index m = bd.basis.cols();
  bd.space = make_space(m, Gram::identity(m), "BD");
  Mat proj = bd.basis.transpose() * bd.graph_gram;
  bd.iota_star = LinOp(proj.sparseView(0.0, 0.0), k.dom(), bd.space);
  bd.iota = LinOp(bd.basis.sparseView(0.0, 0.0), bd.space, k.dom());
  return bd;
}

BoundaryDataReport bd_report(const BoundaryDataSpace& bd) {
  BoundaryDataReport r;
  r.dim = bd.dim();
  const Index m = bd.dim();
  const Mat& b = bd.basis;
  const Mat& gg = bd.graph_gram;
  r.orthonormality = (b.transpose() * gg * b - Mat::Identity(m, m)).cwiseAbs().maxCoeff();
  if (bd.v0.cols() > 0) {
    double scale = std::max((gg * bd.v0).cwiseAbs().maxCoeff(), 1e-300);
    r.complement = (bd.v0.transpose() * gg * b).cwiseAbs().maxCoeff() / scale;
  }
  if (m == 0) return r;
  const bool sa = bd.symmetry == FormalSymmetry::self_adjoint;
  Mat sq = bd.bullet * bd.bullet;
  Mat target = (sa ? -1.0 : 1.0) * Mat::Identity(m, m);
  r.bullet_square = (sq - target).cwiseAbs().maxCoeff();
  Mat sk = sa ? Mat(bd.bullet.transpose() + bd.bullet) : Mat(bd.bullet.transpose() - bd.bullet);
  r.bullet_skew = sk.cwiseAbs().maxCoeff();
  Mat kb = bd.k.coeffs() * b;
  Mat resid = kb - b * (b.transpose() * gg * kb);
  double num = std::sqrt(std::max(0.0, (resid.transpose() * gg * resid).trace()));
  double den = std::sqrt(std::max(1e-300, (kb.transpose() * gg * kb).trace()));
  r.invariance = num / den;
  return r;
}

Mat coordinate_subspace(const std::vector<bool>& keep) {
  Index count = 0;
  for (bool k : keep) count += k ? 1 : 0;
  Mat v = Mat::Zero(static_cast<Index>(keep.size()), count);
  Index c = 0;
  for (std::size_t i = 0; i < keep.size(); ++i) {
    if (keep[i]) v(static_cast<Index>(i), c++) = 1.0;
  }
  return v;
}

Mat curl_interior_subspace(const Grid& grid) {
  if (grid.dim != 3) throw ValidationError("curl_interior_subspace requires a 3D grid");
  const Index n = grid.nodes();
  std::vector<bool> keep(static_cast<std::size_t>(3 * n), true);
  for (Index v = 0; v < n; ++v) {
    auto c = grid.coords(v);
    for (int a = 0; a < 3; ++a) {
      if (!grid.is_bounded(a)) continue;
      if (c[a] != 0 && c[a] != grid.n[a] - 1) continue;
      for (int comp = 0; comp < 3; ++comp) {
        if (comp != a) keep[static_cast<std::size_t>(comp * n + v)] = false;
      }
    }
  }
  return coordinate_subspace(keep);
}

Mat scalar_interior_subspace(const Grid& grid) {
  std::vector<bool> keep(static_cast<std::size_t>(grid.nodes()), true);
  for (Index v = 0; v < grid.nodes(); ++v) {
    if (grid.on_boundary(v)) keep[static_cast<std::size_t>(v)] = false;
  }
  return coordinate_subspace(keep);
}

BoundaryPairingReport bd_identification_check(const BoundaryDataSpace& bd, const Grid& grid,
                                              const Vec& e, const Vec& h) {
  if (grid.dim != 3) throw ValidationError("bd_identification_check requires a 3D grid");
  const Index n = grid.nodes();
  if (e.size() != 3 * n || h.size() != 3 * n) throw ValidationError("bd_identification_check: field size");
  BoundaryPairingReport r;
  Vec ie = bd.iota_star.apply(e);
  Vec ih = bd.iota_star.apply(h);
  r.bullet_pairing = (bd.bullet * ie).dot(ih);
  const Gram& g = bd.k.dom()->gram;
  r.green_pairing = g.inner(bd.k.apply(e), h) - g.inner(e, bd.k.apply(h));
  BoundaryNodes b = boundary_nodes(grid);
  double s = 0.0;
  for (Index q = 0; q < b.size(); ++q) {
    const Index v = b.node[q];
    std::array<double, 3> ev{e[v], e[n + v], e[2 * n + v]};
    std::array<double, 3> hv{h[v], h[n + v], h[2 * n + v]};
    const auto& nn = b.normal[q];
    std::array<double, 3> nxe{nn[1] * ev[2] - nn[2] * ev[1], nn[2] * ev[0] - nn[0] * ev[2],
                              nn[0] * ev[1] - nn[1] * ev[0]};
    s += b.weight[q] * (nxe[0] * hv[0] + nxe[1] * hv[1] + nxe[2] * hv[2]);
  }
  r.surface_pairing = s;
  r.discrepancy = std::abs(r.bullet_pairing - r.surface_pairing);
  r.green_discrepancy = std::abs(r.green_pairing - r.surface_pairing);
  return r;
}

}  // namespace agds
