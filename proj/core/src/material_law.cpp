#include "agds/material_law.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace agds {

namespace {

double radical_inverse(unsigned long i, unsigned base) {
  double inv = 1.0 / base, f = inv, r = 0.0;
  while (i > 0) {
    r += f * static_cast<double>(i % base);
    i /= base;
    f *= inv;
  }
  return r;
}

/// Connected components of the symmetric sparsity graph of the given matrices.
std::vector<std::vector<Index>> components(Index n, const std::vector<const SpMat*>& mats) {
  std::vector<Index> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), Index{0});
  auto find = [&](Index x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  for (const SpMat* m : mats) {
    for (Index k = 0; k < m->outerSize(); ++k) {
      for (SpMat::InnerIterator it(*m, k); it; ++it) {
        Index a = find(it.row()), b = find(it.col());
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
      }
    }
  }
  std::vector<Index> label(static_cast<std::size_t>(n), -1);
  std::vector<std::vector<Index>> out;
  for (Index i = 0; i < n; ++i) {
    Index r = find(i);
    if (label[r] < 0) {
      label[r] = static_cast<Index>(out.size());
      out.emplace_back();
    }
    out[label[r]].push_back(i);
  }
  return out;
}

Mat dense_block(const SpMat& m, const std::vector<Index>& idx) {
  const Index b = static_cast<Index>(idx.size());
  Mat out(b, b);
  for (Index i = 0; i < b; ++i) {
    for (Index j = 0; j < b; ++j) out(i, j) = m.coeff(idx[i], idx[j]);
  }
  return out;
}

double min_hermitian_eig(const CMat& t) {
  if (t.rows() == 1) return t(0, 0).real();
  CMat h = 0.5 * (t + t.adjoint());
  Eigen::SelfAdjointEigenSolver<CMat> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

/// Cached block structure of an affine law.
struct AffineBlocks {
  std::vector<Mat> m0, m1;
  explicit AffineBlocks(const MaterialLaw& law) {
    auto comps = components(law.dim(), {&law.m0(), &law.m1()});
    for (const auto& c : comps) {
      m0.push_back(dense_block(law.m0(), c));
      m1.push_back(dense_block(law.m1(), c));
    }
  }
  double min_at(Complex z) const {
    double best = std::numeric_limits<double>::infinity();
    const Complex s = 1.0 / z;
    for (std::size_t b = 0; b < m0.size(); ++b) {
      CMat t = s * m0[b].cast<Complex>() + m1[b].cast<Complex>();
      best = std::min(best, min_hermitian_eig(t));
    }
    return best;
  }
};

void require_positive(double v, const char* name) {
  if (!(v > 0.0)) {
    std::ostringstream os;
    os << "material law parameter " << name << " must be positive, got " << v;
    throw ValidationError(os.str());
  }
}

void require_nonnegative(double v, const char* name) {
  if (!(v >= 0.0)) {
    std::ostringstream os;
    os << "material law parameter " << name << " must be non-negative, got " << v;
    throw ValidationError(os.str());
  }
}

CSpMat scaled_identity(Complex v, Index n) {
  CSpMat m(n, n);
  m.reserve(Eigen::VectorXi::Constant(n, 1));
  for (Index i = 0; i < n; ++i) m.insert(i, i) = v;
  m.makeCompressed();
  return m;
}

}  // namespace

FrequencySample frequency_sample(Complex z, double rho0) {
  if (!(rho0 > 0.0)) throw ValidationError("frequency sample: rho0 must be positive");
  const double r = 0.5 / rho0;
  if (!(std::abs(z - r) < r)) {
    std::ostringstream os;
    os << "frequency sample z = " << z << " lies outside the ball B(" << r << ", " << r << ")";
    throw ValidationError(os.str());
  }
  return FrequencySample{z, rho0};
}

FrequencySample laplace_sample(Complex s, double rho0) {
  if (!(s.real() > rho0)) {
    std::ostringstream os;
    os << "Laplace variable s = " << s << " must satisfy Re s > " << rho0;
    throw ValidationError(os.str());
  }
  return FrequencySample{1.0 / s, rho0};
}

Complex principal_sqrt(Complex w) {
  if (w.real() <= 0.0 && std::abs(w.imag()) <= 1e-14 * std::max(1.0, std::abs(w))) {
    std::ostringstream os;
    os << "principal square root evaluated on its branch cut at " << w;
    throw BranchCutError(os.str());
  }
  return std::sqrt(w);
}

MaterialLaw MaterialLaw::affine(SpMat m0, SpMat m1) {
  if (m0.rows() != m0.cols() || m1.rows() != m1.cols() || m0.rows() != m1.rows()) {
    throw ValidationError("affine law: M_0 and M_1 must be square of equal size");
  }
  MaterialLaw law;
  law.kind_ = Kind::affine;
  law.dim_ = m0.rows();
  law.affine_ = true;
  law.m0_ = std::move(m0);
  law.m1_ = std::move(m1);
  law.m0_.makeCompressed();
  law.m1_.makeCompressed();
  return law;
}

MaterialLaw MaterialLaw::mohsen(double mu, double tau, double eps, double sigma, Index dim) {
  require_nonnegative(mu, "mu");
  require_nonnegative(tau, "tau");
  require_nonnegative(eps, "eps");
  require_nonnegative(sigma, "sigma");
  require_positive(mu + tau, "mu + tau");
  require_positive(eps + sigma, "eps + sigma");
  MaterialLaw law;
  law.kind_ = Kind::mohsen;
  law.dim_ = dim;
  law.params_ = {mu, tau, eps, sigma};
  return law;
}

MaterialLaw MaterialLaw::senior(double mu, double eps, double sigma, Index dim) {
  require_positive(mu, "mu");
  require_positive(eps, "eps");
  require_nonnegative(sigma, "sigma");
  MaterialLaw law;
  law.kind_ = Kind::senior;
  law.dim_ = dim;
  law.params_ = {mu, eps, sigma};
  return law;
}

MaterialLaw MaterialLaw::eddy_fractional(double mu, double sigma, Index dim) {
  require_positive(mu, "mu");
  require_positive(sigma, "sigma");
  MaterialLaw law;
  law.kind_ = Kind::eddy_fractional;
  law.dim_ = dim;
  law.params_ = {mu, sigma};
  return law;
}

MaterialLaw MaterialLaw::burque_kappa(double k, double gamma, Index dim) {
  require_nonnegative(k, "k");
  require_nonnegative(gamma, "gamma");
  MaterialLaw law;
  law.kind_ = Kind::burque_kappa;
  law.dim_ = dim;
  law.params_ = {k, gamma};
  return law;
}

MaterialLaw MaterialLaw::sampled(std::function<CMat(Complex)> m, Index dim) {
  MaterialLaw law;
  law.kind_ = Kind::sampled;
  law.dim_ = dim;
  law.sampled_ = std::make_shared<std::function<CMat(Complex)>>(std::move(m));
  return law;
}

MaterialLaw MaterialLaw::block_diagonal(std::vector<MaterialLaw> parts) {
  if (parts.empty()) throw ValidationError("block_diagonal law needs at least one part");
  MaterialLaw law;
  law.kind_ = Kind::block_diagonal;
  law.dim_ = 0;
  law.affine_ = true;
  for (const auto& p : parts) {
    law.dim_ += p.dim();
    law.affine_ = law.affine_ && p.is_affine();
  }
  if (law.affine_) {
    std::vector<SpMat> a, b;
    for (const auto& p : parts) {
      a.push_back(p.m0());
      b.push_back(p.m1());
    }
    law.m0_ = agds::block_diag(a);
    law.m1_ = agds::block_diag(b);
  }
  law.parts_ = std::move(parts);
  return law;
}

bool MaterialLaw::is_scalar() const {
  return kind_ == Kind::mohsen || kind_ == Kind::senior || kind_ == Kind::eddy_fractional ||
         kind_ == Kind::burque_kappa;
}

const SpMat& MaterialLaw::m0() const {
  if (!affine_) throw ValidationError("material law is not affine");
  return m0_;
}

const SpMat& MaterialLaw::m1() const {
  if (!affine_) throw ValidationError("material law is not affine");
  return m1_;
}

Complex MaterialLaw::impedance(Complex z) const {
  const auto& p = params_;
  switch (kind_) {
    case Kind::mohsen:
      return principal_sqrt(p[0] + p[1] * z) / principal_sqrt(p[2] + p[3] * z);
    case Kind::senior:
      return std::sqrt(p[0] / p[1]) / principal_sqrt(1.0 + (p[2] / p[1]) * z);
    case Kind::eddy_fractional:
      return std::sqrt(p[0] / p[1]) * principal_sqrt(z);
    default:
      throw ValidationError("impedance is only defined for impedance families");
  }
}

Complex MaterialLaw::scalar_value(Complex z) const {
  switch (kind_) {
    case Kind::mohsen:
    case Kind::senior:
    case Kind::eddy_fractional:
      return z / impedance(z);
    case Kind::burque_kappa: {
      const double k = params_[0], g = params_[1];
      return z - z * (k / 2.0) / (1.0 / z + k / 4.0 + g);
    }
    default:
      throw ValidationError("scalar_value is only defined for scalar families");
  }
}

CMat MaterialLaw::dense_value(Complex z) const {
  if (kind_ == Kind::sampled) {
    CMat m = (*sampled_)(z);
    if (m.rows() != dim_ || m.cols() != dim_) throw ValidationError("sampled law returned a matrix of the wrong size");
    return m;
  }
  return CMat(eval_at(*this, z));
}

CSpMat eval_at(const MaterialLaw& law, Complex z) {
  using Kind = MaterialLaw::Kind;
  switch (law.kind()) {
    case Kind::affine:
      return law.m0().cast<Complex>() + z * law.m1().cast<Complex>();
    case Kind::mohsen:
    case Kind::senior:
    case Kind::eddy_fractional:
    case Kind::burque_kappa:
      return scaled_identity(law.scalar_value(z), law.dim());
    case Kind::sampled: {
      CMat m = law.dense_value(z);
      return m.sparseView();
    }
    case Kind::block_diagonal: {
      std::vector<Eigen::Triplet<Complex>> trips;
      Index off = 0;
      for (const auto& p : law.parts()) {
        CSpMat b = eval_at(p, z);
        for (Index k = 0; k < b.outerSize(); ++k) {
          for (CSpMat::InnerIterator it(b, k); it; ++it) {
            trips.emplace_back(off + it.row(), off + it.col(), it.value());
          }
        }
        off += p.dim();
      }
      CSpMat out(law.dim(), law.dim());
      out.setFromTriplets(trips.begin(), trips.end());
      return out;
    }
  }
  throw ValidationError("unknown material law kind");
}

CSpMat eval(const MaterialLaw& law, const FrequencySample& z) { return eval_at(law, z.z); }

std::vector<Complex> ball_samples(double rho0, const PosdefOptions& opts) {
  const double r = 0.5 / rho0;
  const double two_pi = 2.0 * std::acos(-1.0);
  std::vector<Complex> out;
  const int nb = opts.boundary_samples, ni = opts.interior_samples;
  const int total = nb + ni;
  int ib = 0, ii = 0;
  // interleave so that growing either count only adds points
  for (int k = 0; k < total; ++k) {
    if (ib < nb) {
      double theta = two_pi * radical_inverse(static_cast<unsigned long>(ib + 1), 2) - 0.5 * two_pi;
      out.push_back(r + r * std::polar(1.0, theta));
      ++ib;
    }
    if (ii < ni) {
      double u = radical_inverse(static_cast<unsigned long>(ii + 1), 2);
      double v = radical_inverse(static_cast<unsigned long>(ii + 1), 3);
      out.push_back(r + r * std::sqrt(u) * std::polar(1.0, two_pi * v));
      ++ii;
    }
    if (ib >= nb && ii >= ni) break;
  }
  return out;
}

double posdef_at(const MaterialLaw& law, Complex z) {
  using Kind = MaterialLaw::Kind;
  if (law.is_scalar()) return (law.scalar_value(z) / z).real();
  switch (law.kind()) {
    case Kind::affine:
      return AffineBlocks(law).min_at(z);
    case Kind::block_diagonal: {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& p : law.parts()) best = std::min(best, posdef_at(p, z));
      return best;
    }
    default: {
      CMat t = law.dense_value(z) / z;
      return min_hermitian_eig(t);
    }
  }
}

PosdefReport posdef_check(const MaterialLaw& law, double rho0, const PosdefOptions& opts) {
  if (!(rho0 > 0.0)) throw ValidationError("posdef_check: rho0 must be positive");
  PosdefReport rep;
  rep.c_est = std::numeric_limits<double>::infinity();
  auto samples = ball_samples(rho0, opts);
  std::unique_ptr<AffineBlocks> blocks;
  if (law.is_affine()) blocks = std::make_unique<AffineBlocks>(law);
  for (Complex z : samples) {
    double c = blocks ? blocks->min_at(z) : posdef_at(law, z);
    if (c < rep.c_est) {
      rep.c_est = c;
      rep.z_min = z;
    }
  }
  rep.samples = static_cast<int>(samples.size());
  return rep;
}

AffineReport affine_sufficient(const SpMat& m0, const SpMat& m1) {
  if (m0.rows() != m0.cols() || m1.rows() != m1.cols() || m0.rows() != m1.rows()) {
    throw ValidationError("affine_sufficient: M_0 and M_1 must be square of equal size");
  }
  SpMat asym = SpMat(m0 - SpMat(m0.transpose()));
  double scale = std::max(max_abs(m0), 1e-300);
  if (max_abs(asym) > 1e-12 * scale) {
    std::ostringstream os;
    os << "affine_sufficient: M_0 is not self-adjoint (asymmetry " << max_abs(asym) << ")";
    throw ValidationError(os.str());
  }
  AffineReport rep;
  rep.c0 = std::numeric_limits<double>::infinity();
  rep.c1 = std::numeric_limits<double>::infinity();
  const double tol = 1e-12 * std::max(max_abs(m0), 1.0);
  bool negative = false;
  auto comps = components(m0.rows(), {&m0, &m1});
  for (const auto& c : comps) {
    Mat a = dense_block(m0, c);
    Mat b = dense_block(m1, c);
    a = 0.5 * (a + a.transpose()).eval();
    Mat bs = 0.5 * (b + b.transpose());
    Eigen::SelfAdjointEigenSolver<Mat> es(a);
    const Vec& ev = es.eigenvalues();
    std::vector<Index> kernel;
    for (Index i = 0; i < ev.size(); ++i) {
      if (ev[i] > tol) rep.c0 = std::min(rep.c0, ev[i]);
      else if (ev[i] < -tol) negative = true;
      else kernel.push_back(i);
    }
    if (kernel.empty()) continue;
    Mat nb(a.rows(), static_cast<Index>(kernel.size()));
    for (std::size_t q = 0; q < kernel.size(); ++q) nb.col(static_cast<Index>(q)) = es.eigenvectors().col(kernel[q]);
    Mat comp = nb.transpose() * bs * nb;
    Eigen::SelfAdjointEigenSolver<Mat> ek(comp, Eigen::EigenvaluesOnly);
    rep.c1 = std::min(rep.c1, ek.eigenvalues().minCoeff());
    rep.kernel_dim += static_cast<Index>(kernel.size());
  }
  const bool has_range = rep.kernel_dim < m0.rows();
  if (negative) rep.c0 = -1.0;
  else if (!has_range) rep.c0 = 0.0;
  if (rep.kernel_dim == 0) rep.c1 = 0.0;
  rep.sufficient = !negative && (!has_range || rep.c0 > 0.0) && (rep.kernel_dim == 0 || rep.c1 > 0.0);
  return rep;
}

double burque_kappa_identity(double k, double gamma, int samples) {
  PosdefOptions opts;
  opts.boundary_samples = samples / 2;
  opts.interior_samples = samples - samples / 2;
  double worst = 0.0;
  for (Complex z : ball_samples(1.0 + k, opts)) {
    Complex s = 1.0 / z;
    Complex lhs = 1.0 - (k / 2.0) / (s + k / 4.0 + gamma);
    Complex rhs = (s - k / 4.0 + gamma) / (s + k / 4.0 + gamma);
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

double analyticity_defect(const MaterialLaw& law, Complex z, double h) {
  const Complex i(0.0, 1.0);
  CMat dx = (CMat(eval_at(law, z + h)) - CMat(eval_at(law, z - h))) / (2.0 * h);
  CMat dy = (CMat(eval_at(law, z + i * h)) - CMat(eval_at(law, z - i * h))) / (2.0 * i * h);
  double scale = std::max(1.0, CMat(eval_at(law, z)).cwiseAbs().maxCoeff());
  return (dx - dy).cwiseAbs().maxCoeff() / scale;
}

}  // namespace agds
