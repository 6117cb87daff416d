#include "renyi/compress.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "renyi/errors.hpp"
#include "renyi/parallel.hpp"

namespace renyi {

namespace {

constexpr double kSchemeTolerance = 1e-10;
constexpr double kWeightTolerance = 1e-10;

double trace_product(const Matrix& a, const Matrix& b) { return a.cwiseProduct(b.transpose()).sum().real(); }

Matrix sum_of_powers(std::span<const DensityOp> states, int n, std::size_t cap) {
  Matrix bar = tensor_power(states[0], n, cap).matrix();
  for (std::size_t i = 1; i < states.size(); ++i) bar += tensor_power(states[i], n, cap).matrix();
  return bar;
}

}  // namespace

CompressionScheme::CompressionScheme(HermitianOp s, Vector psi, int n) : s_(std::move(s)), psi_(std::move(psi)), n_(n) {
  if (n_ < 1) throw RangeError("block length must be positive, got " + std::to_string(n_));
  const Matrix& m = s_.matrix();
  if (psi_.size() != m.rows()) throw DimensionMismatch("psi does not match the projection");
  if ((m * m - m).norm() > kSchemeTolerance * std::max<double>(1.0, m.norm()))
    throw InvalidOperator("S is not a projection");
  if (std::abs(psi_.norm() - 1.0) > kSchemeTolerance) throw InvalidOperator("psi is not a unit vector");
  if ((m * psi_ - psi_).norm() > kSchemeTolerance) throw InvalidOperator("psi is not in the range of S");
  rank_ = static_cast<Index>(std::llround(m.trace().real()));
}

std::vector<Matrix> CompressionScheme::kraus() const {
  std::vector<Matrix> out{s_.matrix()};
  const Eigensystem es = eigensystem(s_);
  for (Index i = 0; i < es.values.size(); ++i)
    if (es.values[i] < 0.5) out.push_back(psi_ * es.vectors.col(i).adjoint());
  return out;
}

HermitianOp CompressionScheme::apply(const HermitianOp& x) const {
  const Matrix& s = s_.matrix();
  const double rest = x.matrix().trace().real() - trace_product(x.matrix(), s);
  return HermitianOp(s * x.matrix() * s + rest * psi_ * psi_.adjoint(), unchecked);
}

CompressionScheme build_scheme(std::span<const DensityOp> states, double a, int n, std::size_t cap) {
  if (states.empty()) throw RangeError("compression needs at least one state");
  if (!std::isfinite(a)) throw RangeError("the threshold a must be finite");
  if (n < 1) throw RangeError("block length must be positive, got " + std::to_string(n));
  const Matrix bar = sum_of_powers(states, n, cap);
  const Eigensystem es = eigensystem(HermitianOp(bar, unchecked));
  // eigenvalue lambda passes when e^(-na) lambda > 1
  const double log_threshold = static_cast<double>(n) * a;
  const Index d = bar.rows();
  Matrix s = Matrix::Zero(d, d);
  for (Index i = 0; i < d; ++i) {
    const double lambda = es.values[i];
    if (lambda > 0.0 && std::log(lambda) - log_threshold > 1e-12) s += es.vectors.col(i) * es.vectors.col(i).adjoint();
  }
  if (s.trace().real() < 0.5)
    throw DegenerateScheme("no eigenvalue of the Neyman-Pearson operator passes the threshold a = " +
                           std::to_string(a) + " at n = " + std::to_string(n));
  return CompressionScheme(HermitianOp(s, unchecked), es.vectors.col(d - 1), n);
}

double scheme_entanglement_fidelity(const CompressionScheme& scheme, const DensityOp& rho_n) {
  if (rho_n.dim() != scheme.dim()) throw DimensionMismatch("state does not match the scheme dimension");
  const Matrix& s = scheme.projection().matrix();
  const double kept = trace_product(rho_n.matrix(), s);
  const Vector rp = rho_n.matrix() * scheme.psi();
  const Vector leak = rp - s * rp;
  return std::sqrt(kept * kept + leak.squaredNorm());
}

SchemeFidelity scheme_fidelity(const CompressionScheme& scheme, const DensityOp& rho, std::size_t cap) {
  const DensityOp rho_n = tensor_power(rho, scheme.n(), cap);
  if (rho_n.dim() != scheme.dim()) throw DimensionMismatch("state does not match the scheme dimension");
  const HermitianOp out = scheme.apply(rho_n);
  return {scheme_entanglement_fidelity(scheme, rho_n), fidelity(rho_n, PSDOp(out.matrix(), unchecked))};
}

double compression_rate(const CompressionScheme& scheme) {
  return std::log(static_cast<double>(scheme.rank())) / scheme.n();
}

double renyi_entropy(const DensityOp& rho, double t) {
  if (t == 1.0 || !(t >= 0.0)) throw RangeError("Renyi entropy order must be non-negative and not 1");
  return std::log(trace_power(rho, t)) / (1.0 - t);
}

ExtReal compression_converse_bound(double rate, std::span<const DensityOp> states, std::span<const double> t_grid) {
  if (states.empty()) throw RangeError("compression needs at least one state");
  double best = std::numeric_limits<double>::infinity();
  for (double t : t_grid) {
    if (!(t > 1.0) || !std::isfinite(t)) throw RangeError("converse grid points must exceed 1");
    double s_max = -std::numeric_limits<double>::infinity();
    for (const DensityOp& rho : states) s_max = std::max(s_max, renyi_entropy(rho, t));
    best = std::min(best, (t - 1.0) / t * (rate - s_max));
  }
  return std::isinf(best) ? ExtReal::infinity() : ExtReal(best);
}

double ensemble_fidelity(std::span<const double> weights, std::span<const DensityOp> sources,
                         const CompressionScheme& scheme, std::size_t cap) {
  if (weights.size() != sources.size()) throw DimensionMismatch("one weight per source is required");
  if (sources.empty()) throw RangeError("ensemble needs at least one source");
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw RangeError("ensemble weights must be non-negative");
    total += w;
  }
  if (std::abs(total - 1.0) > kWeightTolerance) throw RangeError("ensemble weights must sum to 1");
  const int n = scheme.n();
  const std::size_t k = sources.size();
  std::vector<std::size_t> digits(static_cast<std::size_t>(n), 0);
  double out = 0.0;
  while (true) {
    double p = 1.0;
    for (std::size_t x : digits) p *= weights[x];
    if (p > 0.0) {
      DensityOp state = sources[digits[0]];
      for (int j = 1; j < n; ++j) state = tensor(state, sources[digits[static_cast<std::size_t>(j)]], cap);
      out += p * scheme_entanglement_fidelity(scheme, state);
    }
    int j = n - 1;
    while (j >= 0 && ++digits[static_cast<std::size_t>(j)] == k) digits[static_cast<std::size_t>(j--)] = 0;
    if (j < 0) break;
  }
  return out;
}

std::vector<CompressRow> compress_sweep(std::span<const DensityOp> states, std::span<const double> a_grid, int n_max,
                                        int jobs, std::size_t cap) {
  if (n_max < 1) throw RangeError("n_max must be positive");
  const std::size_t na = a_grid.size();
  return parallel_map(static_cast<std::size_t>(n_max) * na, jobs, [&](std::size_t idx) {
    const int n = static_cast<int>(idx / na) + 1;
    const double a = a_grid[idx % na];
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    CompressRow row{n, a, false, nan, nan, nan};
    try {
      const CompressionScheme scheme = build_scheme(states, a, n, cap);
      row.valid = true;
      row.rate = compression_rate(scheme);
      row.F_e_worst = std::numeric_limits<double>::infinity();
      row.F_worst = std::numeric_limits<double>::infinity();
      for (const DensityOp& rho : states) {
        const SchemeFidelity f = scheme_fidelity(scheme, rho, cap);
        row.F_e_worst = std::min(row.F_e_worst, f.F_e);
        row.F_worst = std::min(row.F_worst, f.F);
      }
    } catch (const DegenerateScheme&) {
    }
    return row;
  });
}

}  // namespace renyi
