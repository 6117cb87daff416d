#include "renyi/operator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>

namespace renyi {

namespace {

Matrix symmetrized(const Matrix& m) { return 0.5 * (m + m.adjoint()); }

void require_square(const Matrix& m) {
  if (m.rows() == 0 || m.rows() != m.cols())
    throw InvalidOperator("operator must be a non-empty square matrix, got " +
                          std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
}

void require_finite(const Matrix& m) {
  if (!m.allFinite()) throw InvalidOperator("operator has non-finite entries");
}

void require_same_dim(const HermitianOp& a, const HermitianOp& b) {
  if (a.dim() != b.dim())
    throw DimensionMismatch("dimensions differ: " + std::to_string(a.dim()) + " vs " +
                            std::to_string(b.dim()));
}

std::size_t checked_product(std::size_t a, std::size_t b, std::size_t cap) {
  if (a != 0 && b > cap / a) throw CapExceeded(a * b, cap);
  return a * b;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Matrix kron_power(const Matrix& a, int n, std::size_t cap) {
  if (n < 1) throw RangeError("tensor power needs n >= 1, got " + std::to_string(n));
  const auto base = static_cast<std::size_t>(a.rows());
  std::size_t d = base;
  if (d > cap) throw CapExceeded(d, cap);
  for (int k = 1; k < n; ++k) d = checked_product(d, base, cap);
  Matrix out = a;
  for (int k = 1; k < n; ++k) out = kron(out, a);
  return out;
}

Matrix partial_trace_matrix(const Matrix& x, Index da, Index db, TraceOut which) {
  if (da < 1 || db < 1 || x.rows() != da * db)
    throw DimensionMismatch("partial trace: operator of dimension " + std::to_string(x.rows()) +
                            " is not " + std::to_string(da) + "x" + std::to_string(db));
  if (which == TraceOut::First) {
    Matrix out = Matrix::Zero(db, db);
    for (Index a = 0; a < da; ++a) out += x.block(a * db, a * db, db, db);
    return out;
  }
  Matrix out(da, da);
  for (Index a = 0; a < da; ++a)
    for (Index a2 = 0; a2 < da; ++a2) out(a, a2) = x.block(a * db, a2 * db, db, db).trace();
  return out;
}

}  // namespace

std::size_t default_dim_cap() {
  static const std::size_t cap = [] {
    const char* env = std::getenv("RENYI_LAB_DIM_CAP");
    if (env == nullptr || *env == '\0') return std::size_t{4096};
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0' || v == 0) return std::size_t{4096};
    return static_cast<std::size_t>(v);
  }();
  return cap;
}

// HermitianOp

HermitianOp::HermitianOp(Matrix m) {
  require_square(m);
  require_finite(m);
  const double scale = m.cwiseAbs().maxCoeff();
  const double asym = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (asym > kHermiticityTolerance * std::max(scale, 1e-300))
    throw InvalidOperator("operator is not Hermitian (max |A - A^dagger| = " + std::to_string(asym) +
                          ")");
  m_ = symmetrized(m);
}

HermitianOp::HermitianOp(Matrix m, unchecked_t) : m_(symmetrized(m)) {}

HermitianOp HermitianOp::zero(Index dim) {
  if (dim < 1) throw InvalidOperator("dimension must be positive");
  return HermitianOp(Matrix::Zero(dim, dim), unchecked);
}

HermitianOp HermitianOp::diagonal(std::span<const double> diag) {
  if (diag.empty()) throw InvalidOperator("empty diagonal");
  Matrix m = Matrix::Zero(static_cast<Index>(diag.size()), static_cast<Index>(diag.size()));
  for (std::size_t i = 0; i < diag.size(); ++i) m(static_cast<Index>(i), static_cast<Index>(i)) = diag[i];
  return HermitianOp(std::move(m));
}

HermitianOp operator+(const HermitianOp& a, const HermitianOp& b) {
  require_same_dim(a, b);
  return HermitianOp(a.m_ + b.m_, unchecked);
}

HermitianOp operator-(const HermitianOp& a, const HermitianOp& b) {
  require_same_dim(a, b);
  return HermitianOp(a.m_ - b.m_, unchecked);
}

HermitianOp operator*(double c, const HermitianOp& a) { return HermitianOp(c * a.m_, unchecked); }

// PSDOp

namespace {

void require_psd(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
  const RealVector& v = es.eigenvalues();
  const double top = v.maxCoeff();
  if (!(top > 0.0)) throw InvalidOperator("operator is zero or negative semidefinite");
  if (v.minCoeff() < -kZeroThreshold * top)
    throw InvalidOperator("operator is not positive semidefinite (min eigenvalue " +
                          std::to_string(v.minCoeff()) + ")");
}

}  // namespace

PSDOp::PSDOp(Matrix m) : HermitianOp(std::move(m)) { require_psd(m_); }

PSDOp::PSDOp(const HermitianOp& h) : HermitianOp(h) { require_psd(m_); }

PSDOp::PSDOp(Matrix m, unchecked_t) : HermitianOp(std::move(m), unchecked) {}

PSDOp PSDOp::identity(Index dim) {
  if (dim < 1) throw InvalidOperator("dimension must be positive");
  return PSDOp(Matrix::Identity(dim, dim), unchecked);
}

PSDOp PSDOp::diagonal(std::span<const double> diag) { return PSDOp(HermitianOp::diagonal(diag)); }

PSDOp operator+(const PSDOp& a, const PSDOp& b) {
  require_same_dim(a, b);
  return PSDOp(a.m_ + b.m_, unchecked);
}

PSDOp operator*(double c, const PSDOp& a) {
  if (!(c > 0.0)) throw RangeError("PSD scaling needs c > 0");
  return PSDOp(c * a.m_, unchecked);
}

// DensityOp

namespace {

void require_unit_trace(const Matrix& m) {
  const double t = m.trace().real();
  if (std::abs(t - 1.0) > kTraceTolerance)
    throw InvalidOperator("density operator trace is " + std::to_string(t) + ", expected 1");
}

}  // namespace

DensityOp::DensityOp(Matrix m) : PSDOp(std::move(m)) { require_unit_trace(m_); }

DensityOp::DensityOp(const PSDOp& a) : PSDOp(a) { require_unit_trace(m_); }

DensityOp::DensityOp(Matrix m, unchecked_t) : PSDOp(std::move(m), unchecked) {}

DensityOp DensityOp::normalized(const PSDOp& a) { return DensityOp(a.matrix() / a.trace(), unchecked); }

DensityOp DensityOp::maximally_mixed(Index dim) {
  if (dim < 1) throw InvalidOperator("dimension must be positive");
  return DensityOp(Matrix::Identity(dim, dim) / static_cast<double>(dim), unchecked);
}

DensityOp DensityOp::pure(const Vector& psi) {
  const double nrm = psi.norm();
  if (psi.size() == 0 || !(nrm > 0.0)) throw InvalidOperator("pure state from zero vector");
  const Vector u = psi / nrm;
  return DensityOp(u * u.adjoint(), unchecked);
}

DensityOp DensityOp::diagonal(std::span<const double> probs) {
  return DensityOp(PSDOp::diagonal(probs));
}

DensityOp mixture(std::span<const double> weights, std::span<const DensityOp> states) {
  if (weights.size() != states.size() || states.empty())
    throw DimensionMismatch("mixture needs one weight per state");
  double total = 0.0;
  for (double w : weights) {
    if (w < 0.0) throw RangeError("negative mixture weight");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) throw RangeError("mixture weights must sum to 1");
  Matrix m = Matrix::Zero(states[0].dim(), states[0].dim());
  for (std::size_t i = 0; i < states.size(); ++i) {
    require_same_dim(states[0], states[i]);
    m += weights[i] * states[i].matrix();
  }
  return DensityOp(std::move(m), unchecked);
}

// Spectral calculus

Eigensystem eigensystem(const HermitianOp& x) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(x.matrix());
  return {es.eigenvalues(), es.eigenvectors()};
}

HermitianOp SpectralDecomposition::reconstruct() const {
  if (projectors.empty()) throw InvalidOperator("empty spectral decomposition");
  Matrix m = Matrix::Zero(projectors[0].dim(), projectors[0].dim());
  for (std::size_t i = 0; i < projectors.size(); ++i) m += eigenvalues[i] * projectors[i].matrix();
  return HermitianOp(std::move(m), unchecked);
}

SpectralDecomposition spectral_decomposition(const HermitianOp& x) {
  const Eigensystem es = eigensystem(x);
  const Index d = es.values.size();
  const double scale = es.values.cwiseAbs().maxCoeff();
  const double gap = kZeroThreshold * scale;
  SpectralDecomposition out;
  Index i = d - 1;
  while (i >= 0) {
    Index j = i;
    while (j - 1 >= 0 && es.values[i] - es.values[j - 1] <= gap) --j;
    const Matrix v = es.vectors.middleCols(j, i - j + 1);
    out.eigenvalues.push_back(es.values.segment(j, i - j + 1).mean());
    out.projectors.emplace_back(v * v.adjoint(), unchecked);
    i = j - 1;
  }
  return out;
}

bool is_support_eigenvalue(double lambda, double lambda_max) {
  return lambda_max > 0.0 && lambda > kZeroThreshold * lambda_max;
}

PSDOp support_power(const PSDOp& a, double alpha) {
  const Eigensystem es = eigensystem(a);
  const double top = es.values.maxCoeff();
  const Index d = es.values.size();
  RealVector f = RealVector::Zero(d);
  for (Index i = 0; i < d; ++i)
    if (is_support_eigenvalue(es.values[i], top)) f[i] = alpha == 0.0 ? 1.0 : std::pow(es.values[i], alpha);
  return PSDOp(es.vectors * f.asDiagonal() * es.vectors.adjoint(), unchecked);
}

HermitianOp support_projection(const PSDOp& a) { return support_power(a, 0.0); }

bool support_included(const PSDOp& rho, const PSDOp& sigma) {
  require_same_dim(rho, sigma);
  const Matrix pr = support_projection(rho).matrix();
  const Matrix ps = support_projection(sigma).matrix();
  const Index d = rho.dim();
  const double leak = (pr * (Matrix::Identity(d, d) - ps)).trace().real();
  return leak <= 1e-10;
}

HermitianOp positive_part_projection(const HermitianOp& x) {
  const Eigensystem es = eigensystem(x);
  const double scale = es.values.cwiseAbs().maxCoeff();
  const Index d = es.values.size();
  RealVector f = RealVector::Zero(d);
  // Eigenvalues within round-off of zero are treated as zero.
  const double eps = 64.0 * std::numeric_limits<double>::epsilon() * scale;
  for (Index i = 0; i < d; ++i)
    if (es.values[i] > eps) f[i] = 1.0;
  return HermitianOp(es.vectors * f.asDiagonal() * es.vectors.adjoint(), unchecked);
}

double trace_norm(const HermitianOp& x) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(x.matrix(), Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().sum();
}

double trace_power(const HermitianOp& x, double alpha) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(x.matrix(), Eigen::EigenvaluesOnly);
  const double top = es.eigenvalues().maxCoeff();
  double s = 0.0;
  for (Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double l = es.eigenvalues()[i];
    if (is_support_eigenvalue(l, top)) s += alpha == 0.0 ? 1.0 : std::pow(l, alpha);
  }
  return s;
}

double operator_norm(const HermitianOp& x) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(x.matrix(), Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

// Tensor calculus

HermitianOp tensor(const HermitianOp& a, const HermitianOp& b, std::size_t cap) {
  checked_product(static_cast<std::size_t>(a.dim()), static_cast<std::size_t>(b.dim()), cap);
  return HermitianOp(kron(a.matrix(), b.matrix()), unchecked);
}

PSDOp tensor(const PSDOp& a, const PSDOp& b, std::size_t cap) {
  checked_product(static_cast<std::size_t>(a.dim()), static_cast<std::size_t>(b.dim()), cap);
  return PSDOp(kron(a.matrix(), b.matrix()), unchecked);
}

DensityOp tensor(const DensityOp& a, const DensityOp& b, std::size_t cap) {
  checked_product(static_cast<std::size_t>(a.dim()), static_cast<std::size_t>(b.dim()), cap);
  return DensityOp(kron(a.matrix(), b.matrix()), unchecked);
}

HermitianOp tensor_power(const HermitianOp& a, int n, std::size_t cap) {
  return HermitianOp(kron_power(a.matrix(), n, cap), unchecked);
}

PSDOp tensor_power(const PSDOp& a, int n, std::size_t cap) {
  return PSDOp(kron_power(a.matrix(), n, cap), unchecked);
}

DensityOp tensor_power(const DensityOp& a, int n, std::size_t cap) {
  return DensityOp(kron_power(a.matrix(), n, cap), unchecked);
}

HermitianOp partial_trace(const HermitianOp& x, Index dim_a, Index dim_b, TraceOut which) {
  return HermitianOp(partial_trace_matrix(x.matrix(), dim_a, dim_b, which), unchecked);
}

PSDOp partial_trace(const PSDOp& x, Index dim_a, Index dim_b, TraceOut which) {
  return PSDOp(partial_trace_matrix(x.matrix(), dim_a, dim_b, which), unchecked);
}

DensityOp partial_trace(const DensityOp& x, Index dim_a, Index dim_b, TraceOut which) {
  return DensityOp(partial_trace_matrix(x.matrix(), dim_a, dim_b, which), unchecked);
}

// Fidelities

double fidelity(const PSDOp& a, const PSDOp& b) {
  require_same_dim(a, b);
  const Matrix ra = support_power(a, 0.5).matrix();
  const Matrix m = ra * b.matrix() * ra;
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrized(m), Eigen::EigenvaluesOnly);
  double f = 0.0;
  for (Index i = 0; i < es.eigenvalues().size(); ++i) f += std::sqrt(std::max(es.eigenvalues()[i], 0.0));
  return f;
}

bool is_trace_preserving(std::span<const Matrix> kraus, double tol) {
  if (kraus.empty()) return false;
  const Index d = kraus[0].cols();
  Matrix s = Matrix::Zero(d, d);
  for (const Matrix& k : kraus) {
    if (k.cols() != d) return false;
    s.noalias() += k.adjoint() * k;
  }
  s -= Matrix::Identity(d, d);
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrized(s), Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff() <= tol;
}

double entanglement_fidelity(const DensityOp& rho, std::span<const Matrix> kraus) {
  for (const Matrix& k : kraus)
    if (k.rows() != rho.dim() || k.cols() != rho.dim())
      throw DimensionMismatch("Kraus operator shape does not match the state");
  if (!is_trace_preserving(kraus)) throw InvalidOperator("Kraus operators are not trace preserving");
  // <psi|(1 (x) K)|psi> = Tr rho K for the canonical purification.
  double s = 0.0;
  for (const Matrix& k : kraus) s += std::norm((rho.matrix().cwiseProduct(k.transpose())).sum());
  return std::sqrt(s);
}

}  // namespace renyi
