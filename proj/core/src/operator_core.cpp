#include "agds/operator_core.hpp"

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace agds {

namespace {

constexpr Index kExactSpectrumLimit = 600;

Vec random_vec(Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> dist(0.0, 1.0);
  Vec v(n);
  for (Index i = 0; i < n; ++i) v[i] = dist(rng);
  return v;
}

}  // namespace

Gram Gram::identity(Index n) { return diagonal(Vec::Ones(n)); }

Gram Gram::diagonal(Vec weights) {
  Gram g;
  g.diagonal_ = true;
  g.weights_ = std::move(weights);
  return g;
}

Gram Gram::dense(Mat matrix) {
  if (matrix.rows() != matrix.cols()) {
    throw ValidationError("Gram matrix must be square");
  }
  Gram g;
  g.diagonal_ = false;
  g.dense_ = std::move(matrix);
  auto llt = std::make_shared<Eigen::LLT<Mat>>(g.dense_);
  if (llt->info() == Eigen::Success) g.llt_ = std::move(llt);
  return g;
}

Index Gram::dim() const { return diagonal_ ? weights_.size() : dense_.rows(); }

const Vec& Gram::weights() const {
  if (!diagonal_) throw ValidationError("Gram is not diagonal");
  return weights_;
}

Mat Gram::to_dense() const {
  if (diagonal_) return weights_.asDiagonal();
  return dense_;
}

SpMat Gram::to_sparse() const {
  if (diagonal_) return sparse_diag(weights_);
  return dense_.sparseView(0.0, 0.0);
}

Vec Gram::apply(const Vec& x) const {
  if (diagonal_) return weights_.cwiseProduct(x);
  return dense_ * x;
}

Vec Gram::solve(const Vec& x) const {
  if (diagonal_) return x.cwiseQuotient(weights_);
  if (!llt_) throw ValidationError("Gram matrix is not positive definite (Cholesky failed)");
  return llt_->solve(x);
}

SpMat Gram::solve(const SpMat& m) const {
  if (diagonal_) return sparse_diag(weights_.cwiseInverse()) * m;
  if (!llt_) throw ValidationError("Gram matrix is not positive definite (Cholesky failed)");
  Mat dense = llt_->solve(Mat(m));
  return dense.sparseView(0.0, 0.0);
}

double Gram::inner(const Vec& x, const Vec& y) const { return x.dot(apply(y)); }

double Gram::norm(const Vec& x) const { return std::sqrt(std::max(0.0, inner(x, x))); }

Gram block_diagonal(const std::vector<Gram>& blocks) {
  bool all_diag = std::all_of(blocks.begin(), blocks.end(),
                              [](const Gram& g) { return g.is_diagonal(); });
  Index n = 0;
  for (const auto& g : blocks) n += g.dim();
  if (all_diag) {
    Vec w(n);
    Index off = 0;
    for (const auto& g : blocks) {
      w.segment(off, g.dim()) = g.weights();
      off += g.dim();
    }
    return Gram::diagonal(std::move(w));
  }
  Mat m = Mat::Zero(n, n);
  Index off = 0;
  for (const auto& g : blocks) {
    m.block(off, off, g.dim(), g.dim()) = g.to_dense();
    off += g.dim();
  }
  return Gram::dense(std::move(m));
}

SpectrumBounds gram_spectrum(const Gram& g) {
  if (g.is_diagonal()) {
    return {g.weights().minCoeff(), g.weights().maxCoeff()};
  }
  const Index n = g.dim();
  Mat m = g.to_dense();
  if (n <= kExactSpectrumLimit) {
    Eigen::SelfAdjointEigenSolver<Mat> es(m, Eigen::EigenvaluesOnly);
    return {es.eigenvalues().minCoeff(), es.eigenvalues().maxCoeff()};
  }
  if (!g.factorized()) {
    Eigen::SelfAdjointEigenSolver<Mat> es(m, Eigen::EigenvaluesOnly);
    return {es.eigenvalues().minCoeff(), es.eigenvalues().maxCoeff()};
  }
  std::mt19937_64 rng(7);
  Vec v = random_vec(n, rng).normalized();
  double lmax = 0.0;
  for (int it = 0; it < 200; ++it) {
    Vec w = m * v;
    double next = w.norm();
    v = w / next;
    if (std::abs(next - lmax) <= 1e-10 * next) {
      lmax = next;
      break;
    }
    lmax = next;
  }
  v = random_vec(n, rng).normalized();
  double inv = 0.0;
  for (int it = 0; it < 200; ++it) {
    Vec w = g.solve(v);
    double next = w.norm();
    v = w / next;
    if (std::abs(next - inv) <= 1e-10 * next) {
      inv = next;
      break;
    }
    inv = next;
  }
  return {1.0 / inv, lmax};
}

SpacePtr make_space(Index dim, Gram gram, std::string label) {
  if (gram.dim() != dim) {
    std::ostringstream os;
    os << "Gram size " << gram.dim() << " does not match dimension " << dim;
    throw ValidationError(os.str());
  }
  if (gram.is_diagonal()) {
    const Vec& w = gram.weights();
    if (dim > 0 && !(w.minCoeff() > 1e-12 * w.maxCoeff()) ) {
      Index idx = 0;
      double wmin = w.minCoeff(&idx);
      std::ostringstream os;
      os << "Gram not positive definite: eigenvalue " << wmin << " at index " << idx;
      throw ValidationError(os.str());
    }
  } else {
    Mat m = gram.to_dense();
    double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
    double scale = std::max(m.cwiseAbs().maxCoeff(), 1e-300);
    if (asym > 1e-12 * scale) {
      std::ostringstream os;
      os << "Gram not symmetric: max asymmetry " << asym;
      throw ValidationError(os.str());
    }
    SpectrumBounds sb = gram_spectrum(gram);
    if (!(sb.min > 1e-12 * sb.max)) {
      std::ostringstream os;
      os << "Gram not positive definite: smallest eigenvalue " << sb.min
         << " vs largest " << sb.max;
      throw ValidationError(os.str());
    }
  }
  auto s = std::make_shared<Space>();
  s->dim = dim;
  s->gram = std::move(gram);
  s->label = std::move(label);
  return s;
}

SpacePtr euclidean_space(Index dim, std::string label) {
  return make_space(dim, Gram::identity(dim), std::move(label));
}

SpacePtr direct_sum(const std::vector<SpacePtr>& parts, std::string label) {
  std::vector<Gram> grams;
  Index n = 0;
  for (const auto& p : parts) {
    grams.push_back(p->gram);
    n += p->dim;
  }
  auto s = std::make_shared<Space>();
  s->dim = n;
  s->gram = block_diagonal(grams);
  s->label = std::move(label);
  return s;
}

LinOp::LinOp(SpMat coeffs, SpacePtr dom, SpacePtr codom)
    : coeffs_(std::move(coeffs)), dom_(std::move(dom)), codom_(std::move(codom)) {
  if (!dom_ || !codom_) throw ValidationError("LinOp requires domain and codomain");
  if (coeffs_.cols() != dom_->dim || coeffs_.rows() != codom_->dim) {
    std::ostringstream os;
    os << "LinOp shape " << coeffs_.rows() << "x" << coeffs_.cols()
       << " does not match spaces " << codom_->dim << " <- " << dom_->dim;
    throw ValidationError(os.str());
  }
  coeffs_.makeCompressed();
}

LinOp LinOp::rebind(SpacePtr dom, SpacePtr codom) const {
  return LinOp(coeffs_, std::move(dom), std::move(codom));
}

LinOp compose(const LinOp& outer, const LinOp& inner) {
  if (outer.dom()->dim != inner.codom()->dim) {
    throw ValidationError("compose: dimension mismatch");
  }
  SpMat c = (outer.coeffs() * inner.coeffs()).pruned(0.0, 0.0);
  return LinOp(c, inner.dom(), outer.codom());
}

LinOp operator*(double a, const LinOp& t) {
  return LinOp(SpMat(a * t.coeffs()), t.dom(), t.codom());
}

LinOp operator+(const LinOp& a, const LinOp& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ValidationError("operator sum: shape mismatch");
  }
  return LinOp(SpMat(a.coeffs() + b.coeffs()), a.dom(), a.codom());
}

LinOp operator-(const LinOp& a, const LinOp& b) { return a + (-1.0) * b; }

LinOp identity_op(const SpacePtr& x) { return LinOp(sparse_identity(x->dim), x, x); }

LinOp zero_op(const SpacePtr& dom, const SpacePtr& codom) {
  return LinOp(SpMat(codom->dim, dom->dim), dom, codom);
}

LinOp gram_adjoint(const LinOp& t) {
  SpMat tt = t.coeffs().transpose();
  SpMat right;
  const Gram& gc = t.codom()->gram;
  if (gc.is_diagonal()) {
    right = tt * sparse_diag(gc.weights());
  } else {
    right = (Mat(tt) * gc.to_dense()).sparseView(0.0, 0.0);
  }
  SpMat coeffs = t.dom()->gram.solve(right);
  return LinOp(coeffs, t.codom(), t.dom());
}

double adjoint_defect(const LinOp& t, const LinOp& t_star, int pairs, unsigned seed) {
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  const Gram& gx = t.dom()->gram;
  const Gram& gy = t.codom()->gram;
  for (int k = 0; k < pairs; ++k) {
    Vec x = random_vec(t.cols(), rng);
    Vec y = random_vec(t.rows(), rng);
    double lhs = gy.inner(t.apply(x), y);
    double rhs = gx.inner(x, t_star.apply(y));
    double scale = gx.norm(x) * gy.norm(y);
    worst = std::max(worst, std::abs(lhs - rhs) / std::max(scale, 1e-300));
  }
  return worst;
}

GraphSpace graph_space(const LinOp& c0) {
  const Gram& gx = c0.dom()->gram;
  const Gram& gy = c0.codom()->gram;
  SpMat cg = c0.coeffs().transpose() * gy.to_sparse() * c0.coeffs();
  Mat g = Mat(cg) + gx.to_dense();
  g = 0.5 * (g + g.transpose()).eval();
  GraphSpace out;
  out.base = c0.dom();
  out.space = make_space(c0.cols(), Gram::dense(std::move(g)),
                         c0.dom()->label + ":graph");
  out.generator = c0.rebind(out.space, c0.codom());
  return out;
}

double Diamond::pair(const Vec& y, const Vec& x) const {
  return s.codom()->gram.inner(s.apply(x), y);
}

Diamond diamond(const LinOp& s, const GraphSpace& x1) {
  if (s.cols() != x1.space->dim) {
    throw ValidationError("diamond: operator domain does not match the graph space");
  }
  Diamond d;
  d.s = s.rebind(x1.space, s.codom());
  d.x1_rep = gram_adjoint(d.s);
  d.x0_rep = gram_adjoint(s.rebind(x1.base, s.codom()));
  return d;
}

double max_abs(const SpMat& a) {
  double m = 0.0;
  for (Index k = 0; k < a.outerSize(); ++k) {
    for (SpMat::InnerIterator it(a, k); it; ++it) m = std::max(m, std::abs(it.value()));
  }
  return m;
}

double max_rel_diff(const SpMat& a, const SpMat& b) {
  double scale = std::max(max_abs(a), max_abs(b));
  if (scale == 0.0) return 0.0;
  return max_abs(SpMat(a - b)) / scale;
}

SpMat kron(const SpMat& a, const SpMat& b) {
  SpMat out = Eigen::kroneckerProduct(a, b);
  return out;
}

SpMat sparse_identity(Index n) {
  SpMat i(n, n);
  i.setIdentity();
  return i;
}

SpMat sparse_diag(const Vec& d) {
  std::vector<Triplet> trips;
  trips.reserve(static_cast<std::size_t>(d.size()));
  for (Index i = 0; i < d.size(); ++i) {
    if (d[i] != 0.0) trips.emplace_back(i, i, d[i]);
  }
  SpMat m(d.size(), d.size());
  m.setFromTriplets(trips.begin(), trips.end());
  return m;
}

namespace {

SpMat place_blocks(const std::vector<SpMat>& blocks, bool vertical, bool diagonal) {
  Index rows = 0, cols = 0;
  for (const auto& b : blocks) {
    if (vertical || diagonal) rows += b.rows(); else rows = std::max(rows, b.rows());
    if (!vertical || diagonal) cols += b.cols(); else cols = std::max(cols, b.cols());
  }
  std::vector<Triplet> trips;
  Index ro = 0, co = 0;
  for (const auto& b : blocks) {
    if (!diagonal) {
      if (vertical && b.cols() != cols) throw ValidationError("vstack: column mismatch");
      if (!vertical && b.rows() != rows) throw ValidationError("hstack: row mismatch");
    }
    for (Index k = 0; k < b.outerSize(); ++k) {
      for (SpMat::InnerIterator it(b, k); it; ++it) {
        trips.emplace_back(ro + it.row(), co + it.col(), it.value());
      }
    }
    if (vertical || diagonal) ro += b.rows();
    if (!vertical || diagonal) co += b.cols();
  }
  SpMat out(rows, cols);
  out.setFromTriplets(trips.begin(), trips.end());
  return out;
}

}  // namespace

SpMat vstack(const std::vector<SpMat>& blocks) { return place_blocks(blocks, true, false); }
SpMat hstack(const std::vector<SpMat>& blocks) { return place_blocks(blocks, false, false); }
SpMat block_diag(const std::vector<SpMat>& blocks) { return place_blocks(blocks, false, true); }

}  // namespace agds
