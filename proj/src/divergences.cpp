#include "renyi/divergences.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "renyi/numeric.hpp"

namespace renyi {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Squared overlaps below this are round-off between orthogonal eigenvectors.
constexpr double kOverlapFloor = 1e-20;

// Rows of the graded matrix whose log-scales differ by more than this are
// decoupled: cross terms fall below double precision.
constexpr double kBlockGap = 40.0;
// Largest log-scale spread inside one block; squared scales must stay normal.
constexpr double kBlockSpread = 300.0;

struct SupportSpectrum {
  RealVector values;
  Matrix vectors;
};

SupportSpectrum support_spectrum(const PSDOp& a) {
  const Eigensystem es = eigensystem(a);
  const double top = es.values.maxCoeff();
  std::vector<Index> keep;
  for (Index i = es.values.size() - 1; i >= 0; --i)
    if (is_support_eigenvalue(es.values[i], top)) keep.push_back(i);
  SupportSpectrum out{RealVector(static_cast<Index>(keep.size())),
                      Matrix(a.dim(), static_cast<Index>(keep.size()))};
  for (std::size_t k = 0; k < keep.size(); ++k) {
    out.values[static_cast<Index>(k)] = es.values[keep[k]];
    out.vectors.col(static_cast<Index>(k)) = es.vectors.col(keep[k]);
  }
  return out;
}

void check_alpha_positive(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha))
    throw RangeError("alpha must be a positive finite number, got " + std::to_string(alpha));
}

// Contiguous runs of the sorted log-scales g (descending) that can be treated
// as independent blocks.
std::vector<std::pair<std::size_t, std::size_t>> graded_blocks(const std::vector<double>& g) {
  std::vector<std::pair<std::size_t, std::size_t>> coarse;
  std::size_t start = 0;
  for (std::size_t k = 1; k <= g.size(); ++k)
    if (k == g.size() || g[k - 1] - g[k] > kBlockGap) {
      coarse.emplace_back(start, k);
      start = k;
    }
  std::vector<std::pair<std::size_t, std::size_t>> out;
  std::vector<std::pair<std::size_t, std::size_t>> stack(coarse.rbegin(), coarse.rend());
  while (!stack.empty()) {
    auto [b, e] = stack.back();
    stack.pop_back();
    if (e - b < 2 || g[b] - g[e - 1] <= kBlockSpread) {
      out.emplace_back(b, e);
      continue;
    }
    std::size_t cut = b + 1;
    for (std::size_t k = b + 1; k < e; ++k)
      if (g[k - 1] - g[k] > g[cut - 1] - g[cut]) cut = k;
    stack.emplace_back(cut, e);
    stack.emplace_back(b, cut);
  }
  return out;
}


// Eigenvalues of a positive definite Gram matrix with a strongly graded
// diagonal: Cholesky, then one-sided Jacobi on the factor.
std::vector<double> graded_gram_eigenvalues(const Matrix& gram) {
  const Index n = gram.rows();
  Matrix r;
  Eigen::LLT<Matrix> llt(gram);
  if (llt.info() == Eigen::Success) {
    r = llt.matrixU();
  } else {
    Eigen::SelfAdjointEigenSolver<Matrix> es(gram);
    std::vector<double> out(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = std::max(es.eigenvalues()[i], 0.0);
    return out;
  }
  const double tol = 4.0 * std::numeric_limits<double>::epsilon() * static_cast<double>(n);
  for (int sweep = 0; sweep < 60; ++sweep) {
    bool rotated = false;
    for (Index i = 0; i < n; ++i)
      for (Index j = i + 1; j < n; ++j) {
        const double a = r.col(i).squaredNorm(), b = r.col(j).squaredNorm();
        const std::complex<double> c_ij = r.col(i).dot(r.col(j));
        const double gamma = std::abs(c_ij);
        if (gamma <= tol * std::sqrt(a * b)) continue;
        rotated = true;
        const std::complex<double> phase = std::conj(c_ij) / gamma;
        const double zeta = (b - a) / (2.0 * gamma);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double cs = 1.0 / std::sqrt(1.0 + t * t), sn = cs * t;
        const Eigen::VectorXcd x = r.col(i), y = phase * r.col(j);
        r.col(i) = cs * x - sn * y;
        r.col(j) = sn * x + cs * y;
      }
    if (!rotated) break;
  }
  std::vector<double> out(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = r.col(i).squaredNorm();
  return out;
}

}  // namespace

std::string_view to_string(Family f) { return f == Family::Old ? "old" : "new"; }

bool is_numerical_limit(Family family, double alpha) { return family == Family::New && alpha == 0.0; }

SpectralPair::SpectralPair(const PSDOp& rho, const PSDOp& sigma) : dim_(rho.dim()) {
  if (rho.dim() != sigma.dim())
    throw DimensionMismatch("rho and sigma dimensions differ: " + std::to_string(rho.dim()) + " vs " +
                            std::to_string(sigma.dim()));
  const SupportSpectrum rs = support_spectrum(rho);
  const SupportSpectrum ss = support_spectrum(sigma);
  r_ = rs.values;
  s_ = ss.values;
  log_r_ = r_.array().log();
  log_s_ = s_.array().log();
  overlap_ = ss.vectors.adjoint() * rs.vectors;
  trace_rho_ = rho.trace();
  // Tr P_rho (I - P_sigma)
  const double leak = static_cast<double>(r_.size()) - overlap_.squaredNorm();
  support_included_ = leak <= 1e-10;
}

double SpectralPair::log_q_old(double alpha) const {
  check_alpha_positive(alpha);
  std::vector<double> terms;
  terms.reserve(static_cast<std::size_t>(overlap_.size()));
  for (Index j = 0; j < overlap_.rows(); ++j)
    for (Index i = 0; i < overlap_.cols(); ++i) {
      const double w = std::norm(overlap_(j, i));
      if (w <= kOverlapFloor) continue;
      terms.push_back(alpha * log_r_[i] + (1.0 - alpha) * log_s_[j] + std::log(w));
    }
  return log_sum_exp(terms);
}

double SpectralPair::log_q_new(double alpha) const {
  check_alpha_positive(alpha);
  // Singular values of diag(s^p) V with V = W^dagger U diag(sqrt r) give
  // Q = sum sv^(2 alpha). Rows are processed from the largest scale down;
  // each block only sees the part of its rows orthogonal to the row space
  // already accounted for.
  const double p = (1.0 - alpha) / (2.0 * alpha);
  const Index ks = overlap_.rows(), kr = overlap_.cols();
  if (ks == 0 || kr == 0) return -kInf;
  const Matrix v = overlap_ * r_.cwiseSqrt().asDiagonal();
  std::vector<Index> order(static_cast<std::size_t>(ks));
  std::iota(order.begin(), order.end(), Index{0});
  std::vector<double> g_all(static_cast<std::size_t>(ks));
  for (Index j = 0; j < ks; ++j) g_all[static_cast<std::size_t>(j)] = p * log_s_[j];
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    return g_all[static_cast<std::size_t>(a)] > g_all[static_cast<std::size_t>(b)];
  });
  std::vector<double> g(order.size());
  for (std::size_t k = 0; k < order.size(); ++k) g[k] = g_all[static_cast<std::size_t>(order[k])];

  const double rank_floor = 1e-10 * std::sqrt(std::max(trace_rho_, 0.0));
  Matrix basis(kr, 0);
  std::vector<double> terms;
  for (auto [b, e] : graded_blocks(g)) {
    if (basis.cols() == kr) break;
    const Index m = static_cast<Index>(e - b);
    // Gram-Schmidt in descending scale order: coordinates are echelon, so the
    // scaled Gram matrix below is graded and its eigenvalues keep relative accuracy.
    const Index first = basis.cols();
    Matrix coords = Matrix::Zero(m, kr);
    for (Index k = 0; k < m; ++k) {
      const Eigen::RowVectorXcd row = v.row(order[b + static_cast<std::size_t>(k)]);
      Eigen::RowVectorXcd res = row;
      for (int pass = 0; pass < 2 && basis.cols() > 0; ++pass) res -= (res * basis) * basis.adjoint();
      const double norm = res.norm();
      if (norm > rank_floor && basis.cols() < kr) {
        Matrix grown(kr, basis.cols() + 1);
        grown << basis, (res / norm).adjoint();
        basis = std::move(grown);
      }
      const Index known = basis.cols() - first;
      if (known > 0) coords.row(k).head(known) = row * basis.rightCols(known);
    }
    const Index rank = basis.cols() - first;
    if (rank == 0) continue;
    const double top = g[b];
    Matrix gram = Matrix::Zero(rank, rank);
    for (Index k = 0; k < m; ++k) {
      const Eigen::RowVectorXcd z = coords.row(k).head(rank);
      gram.noalias() += std::exp(2.0 * (g[b + static_cast<std::size_t>(k)] - top)) * (z.adjoint() * z);
    }
    for (double sv2 : graded_gram_eigenvalues(gram))
      if (sv2 > 0.0) terms.push_back(alpha * (std::log(sv2) + 2.0 * top));
  }
  return log_sum_exp(terms);
}

double SpectralPair::relative_entropy() const {
  if (!support_included_) return kInf;
  double s = 0.0;
  for (Index i = 0; i < r_.size(); ++i) s += r_[i] * log_r_[i];
  for (Index j = 0; j < overlap_.rows(); ++j)
    for (Index i = 0; i < overlap_.cols(); ++i) s -= r_[i] * std::norm(overlap_(j, i)) * log_s_[j];
  return s / trace_rho_;
}

double SpectralPair::log_max_ratio() const {
  if (!support_included_) return kInf;
  const RealVector inv_sqrt = s_.cwiseSqrt().cwiseInverse();
  const Matrix m = inv_sqrt.asDiagonal() * overlap_ * r_.asDiagonal() * overlap_.adjoint() *
                   inv_sqrt.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
  return std::log(es.eigenvalues().maxCoeff());
}

double SpectralPair::log_max_overlap_ratio() const {
  if (!support_included_) return kInf;
  double best = -kInf;
  for (Index j = 0; j < overlap_.rows(); ++j)
    for (Index i = 0; i < overlap_.cols(); ++i)
      if (std::norm(overlap_(j, i)) > kOverlapFloor) best = std::max(best, log_r_[i] - log_s_[j]);
  return best;
}

double log_q_old(const PSDOp& rho, const PSDOp& sigma, double alpha) {
  return SpectralPair(rho, sigma).log_q_old(alpha);
}

double log_q_new(const PSDOp& rho, const PSDOp& sigma, double alpha) {
  return SpectralPair(rho, sigma).log_q_new(alpha);
}

double q_old(const PSDOp& rho, const PSDOp& sigma, double alpha) {
  return std::exp(log_q_old(rho, sigma, alpha));
}

double q_new(const PSDOp& rho, const PSDOp& sigma, double alpha) {
  return std::exp(log_q_new(rho, sigma, alpha));
}

ExtReal d_renyi(const SpectralPair& pair, double alpha, Family family) {
  if (std::isnan(alpha) || alpha < 0.0)
    throw RangeError("alpha must lie in [0, inf], got " + std::to_string(alpha));
  if (alpha == 1.0) {
    const double d = pair.relative_entropy();
    return std::isinf(d) ? ExtReal::infinity() : ExtReal(d);
  }
  if (std::isinf(alpha)) {
    const double d = family == Family::Old ? pair.log_max_overlap_ratio() : pair.log_max_ratio();
    return std::isinf(d) && d > 0 ? ExtReal::infinity() : ExtReal(d);
  }
  if (alpha == 0.0) {
    if (family == Family::New) return d_renyi(pair, kNewFamilyZeroSurrogate, family);
    // log Tr rho - log Tr rho^0 sigma
    const double lq = pair.log_q_old(std::numeric_limits<double>::min());
    if (std::isinf(lq)) return ExtReal::infinity();
    return ExtReal(std::log(pair.trace_rho()) - lq);
  }
  if (alpha > 1.0 && !pair.support_included()) return ExtReal::infinity();
  const double lq = family == Family::Old ? pair.log_q_old(alpha) : pair.log_q_new(alpha);
  if (std::isinf(lq)) return ExtReal::infinity();
  return ExtReal((lq - std::log(pair.trace_rho())) / (alpha - 1.0));
}

ExtReal d_renyi(const PSDOp& rho, const PSDOp& sigma, double alpha, Family family) {
  if (rho.dim() == sigma.dim() && rho.matrix() == sigma.matrix()) {
    if (std::isnan(alpha) || alpha < 0.0)
      throw RangeError("alpha must lie in [0, inf], got " + std::to_string(alpha));
    return ExtReal(0.0);
  }
  return d_renyi(SpectralPair(rho, sigma), alpha, family);
}

ExtReal d_renyi(const HermitianOp& rho, const HermitianOp& sigma, double alpha, Family family) {
  if (rho.dim() != sigma.dim()) throw DimensionMismatch("rho and sigma dimensions differ");
  auto is_zero = [](const HermitianOp& x) { return x.matrix().cwiseAbs().maxCoeff() == 0.0; };
  if (is_zero(rho)) throw UndefinedInput("divergence of the zero operator is undefined");
  const PSDOp r(rho);
  if (is_zero(sigma)) return ExtReal::infinity();
  return d_renyi(r, PSDOp(sigma), alpha, family);
}

ExtReal umegaki(const PSDOp& rho, const PSDOp& sigma) { return d_renyi(rho, sigma, 1.0, Family::Old); }

ExtReal d_max(const PSDOp& rho, const PSDOp& sigma) { return d_renyi(rho, sigma, kInf, Family::New); }

double renyi_entropy(const PSDOp& rho, double alpha) {
  if (std::isnan(alpha) || alpha < 0.0)
    throw RangeError("alpha must lie in [0, inf], got " + std::to_string(alpha));
  const Eigensystem es = eigensystem(rho);
  const double top = es.values.maxCoeff();
  std::vector<double> lam;
  for (Index i = 0; i < es.values.size(); ++i)
    if (is_support_eigenvalue(es.values[i], top)) lam.push_back(es.values[i]);
  double tr = 0.0;
  for (double x : lam) tr += x;
  if (std::isinf(alpha)) return -std::log(top);
  if (alpha == 0.0) return std::log(static_cast<double>(lam.size())) - std::log(tr);
  if (alpha == 1.0) {
    double h = 0.0;
    for (double x : lam) h -= x * std::log(x);
    return h / tr;
  }
  std::vector<double> logs;
  for (double x : lam) logs.push_back(alpha * std::log(x));
  return (log_sum_exp(logs) - std::log(tr)) / (1.0 - alpha);
}

TcrEnvelope::TcrEnvelope(const PSDOp& rho, const PSDOp& sigma, double c) : c_(c) {
  if (!(c > 0.0)) throw RangeError("c must be positive");
  const SpectralPair pair(rho, sigma);
  if (!pair.support_included()) throw SupportViolation("tcr_envelope requires supp rho <= supp sigma");
  const Matrix a = support_power(rho, 1.5).matrix() * support_power(sigma, -0.5).matrix();
  const Matrix b = support_power(rho, 0.5).matrix() * support_power(sigma, 0.5).matrix();
  eta_ = 1.0 + a.trace().real() + b.trace().real();
  delta_ = std::min(0.5, c / (2.0 * std::log(eta_)));
  d1_ = pair.relative_entropy();
  log_trace_rho_ = std::log(rho.trace());
  log_sigma_norm_ = std::log(pair.sigma_norm());
  const Eigensystem es = eigensystem(rho);
  std::vector<double> keep;
  for (Index i = 0; i < es.values.size(); ++i)
    if (is_support_eigenvalue(es.values[i], es.values.maxCoeff())) keep.push_back(es.values[i]);
  rho_spectrum_ = Eigen::Map<RealVector>(keep.data(), static_cast<Index>(keep.size()));
}

void TcrEnvelope::check_alpha(double alpha) const {
  const bool below = alpha > 1.0 - delta_ && alpha < 1.0;
  const bool above = alpha > 1.0 && alpha < 1.0 + delta_;
  if (!below && !above)
    throw RangeError("alpha " + std::to_string(alpha) + " outside (1-delta,1) u (1,1+delta)");
}

double TcrEnvelope::gap(double alpha) const {
  const double l = std::log(eta_);
  return 4.0 * (1.0 - alpha) * l * l * std::cosh(c_);
}

double TcrEnvelope::lower_old(double alpha) const {
  check_alpha(alpha);
  return alpha < 1.0 ? d1_ - gap(alpha) : d1_;
}

double TcrEnvelope::upper_old(double alpha) const {
  check_alpha(alpha);
  return alpha < 1.0 ? d1_ : d1_ - gap(alpha);
}

double TcrEnvelope::lower_new(double alpha) const {
  check_alpha(alpha);
  if (alpha > 1.0) return d1_;
  std::vector<double> logs;
  for (Index i = 0; i < rho_spectrum_.size(); ++i) logs.push_back(alpha * std::log(rho_spectrum_[i]));
  return alpha * d1_ - alpha * gap(alpha) + log_trace_rho_ - log_sum_exp(logs) -
         (1.0 - alpha) * log_sigma_norm_;
}

double TcrEnvelope::upper_new(double alpha) const {
  check_alpha(alpha);
  return alpha < 1.0 ? d1_ : d1_ - gap(alpha);
}

}  // namespace renyi
