#pragma once

// Dense Hermitian operators and the spectral calculus the rest of the library
// is built on: support-restricted powers, spectral projections, tensor
// products, partial traces and fidelities.

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "renyi/errors.hpp"

namespace renyi {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Eigenvalues at or below this fraction of the largest one count as zero.
inline constexpr double kZeroThreshold = 1e-10;
/// Relative tolerance for A == A^dagger when validating input.
inline constexpr double kHermiticityTolerance = 1e-12;
/// Allowed deviation of the trace of a density operator from 1.
inline constexpr double kTraceTolerance = 1e-10;

/// Largest dimension a tensor product may produce. Reads RENYI_LAB_DIM_CAP
/// once; defaults to 4096.
std::size_t default_dim_cap();

/// Tag for constructors that skip validation. The caller guarantees the
/// invariants of the target type (the matrix is still symmetrized).
struct unchecked_t {
  explicit unchecked_t() = default;
};
inline constexpr unchecked_t unchecked{};

class HermitianOp {
public:
  explicit HermitianOp(Matrix m);
  HermitianOp(Matrix m, unchecked_t);

  static HermitianOp zero(Index dim);
  static HermitianOp diagonal(std::span<const double> diag);

  Index dim() const { return m_.rows(); }
  const Matrix& matrix() const { return m_; }
  double trace() const { return m_.trace().real(); }

  friend HermitianOp operator+(const HermitianOp& a, const HermitianOp& b);
  friend HermitianOp operator-(const HermitianOp& a, const HermitianOp& b);
  friend HermitianOp operator*(double c, const HermitianOp& a);

protected:
  Matrix m_;
};

/// Non-zero positive semidefinite operator.
class PSDOp : public HermitianOp {
public:
  explicit PSDOp(Matrix m);
  explicit PSDOp(const HermitianOp& h);
  PSDOp(Matrix m, unchecked_t);

  static PSDOp identity(Index dim);
  static PSDOp diagonal(std::span<const double> diag);
  static PSDOp diagonal(std::initializer_list<double> diag) {
    return diagonal(std::span<const double>(diag.begin(), diag.size()));
  }

  friend PSDOp operator+(const PSDOp& a, const PSDOp& b);
  /// c * A for c > 0.
  friend PSDOp operator*(double c, const PSDOp& a);
};

/// Positive semidefinite operator with unit trace.
class DensityOp : public PSDOp {
public:
  explicit DensityOp(Matrix m);
  explicit DensityOp(const PSDOp& a);
  DensityOp(Matrix m, unchecked_t);

  /// A / Tr A.
  static DensityOp normalized(const PSDOp& a);
  static DensityOp maximally_mixed(Index dim);
  static DensityOp pure(const Vector& psi);
  static DensityOp diagonal(std::span<const double> probs);
  static DensityOp diagonal(std::initializer_list<double> probs) {
    return diagonal(std::span<const double>(probs.begin(), probs.size()));
  }
};

/// Convex combination sum_i w_i rho_i; weights must be a probability vector.
DensityOp mixture(std::span<const double> weights, std::span<const DensityOp> states);

/// Raw eigensystem, eigenvalues ascending (Eigen's order).
struct Eigensystem {
  RealVector values;
  Matrix vectors;
};

Eigensystem eigensystem(const HermitianOp& x);

/// Eigenvalues in descending order with one projector per distinct
/// eigenvalue. Eigenvalues closer than kZeroThreshold * max|lambda| share a
/// projector.
struct SpectralDecomposition {
  std::vector<double> eigenvalues;
  std::vector<HermitianOp> projectors;

  HermitianOp reconstruct() const;
};

SpectralDecomposition spectral_decomposition(const HermitianOp& x);

/// Applies f to the eigenvalues of x.
template <class F>
HermitianOp apply_spectral(const HermitianOp& x, F&& f) {
  const Eigensystem es = eigensystem(x);
  RealVector fv(es.values.size());
  for (Index i = 0; i < es.values.size(); ++i) fv[i] = f(es.values[i]);
  return HermitianOp(es.vectors * fv.asDiagonal() * es.vectors.adjoint(), unchecked);
}

/// sum_i lambda_i^alpha P_i over the strictly positive part of the spectrum.
/// alpha = 0 gives the support projection; negative alpha is allowed.
PSDOp support_power(const PSDOp& a, double alpha);
HermitianOp support_projection(const PSDOp& a);

/// Whether an eigenvalue of a PSD operator lies in its support.
bool is_support_eigenvalue(double lambda, double lambda_max);

/// True when supp(rho) is contained in supp(sigma).
bool support_included(const PSDOp& rho, const PSDOp& sigma);

/// Spectral projection {X > 0}.
HermitianOp positive_part_projection(const HermitianOp& x);

double trace_norm(const HermitianOp& x);
/// Tr x^alpha over the positive support of x; alpha = 0 counts the rank.
/// Zero when x has no positive eigenvalue.
double trace_power(const HermitianOp& x, double alpha);
/// Largest absolute eigenvalue.
double operator_norm(const HermitianOp& x);

HermitianOp tensor(const HermitianOp& a, const HermitianOp& b, std::size_t cap = default_dim_cap());
PSDOp tensor(const PSDOp& a, const PSDOp& b, std::size_t cap = default_dim_cap());
DensityOp tensor(const DensityOp& a, const DensityOp& b, std::size_t cap = default_dim_cap());

HermitianOp tensor_power(const HermitianOp& a, int n, std::size_t cap = default_dim_cap());
PSDOp tensor_power(const PSDOp& a, int n, std::size_t cap = default_dim_cap());
DensityOp tensor_power(const DensityOp& a, int n, std::size_t cap = default_dim_cap());

enum class TraceOut { First, Second };

/// Partial trace of an operator on C^dA (x) C^dB.
HermitianOp partial_trace(const HermitianOp& x, Index dim_a, Index dim_b, TraceOut which);
PSDOp partial_trace(const PSDOp& x, Index dim_a, Index dim_b, TraceOut which);
DensityOp partial_trace(const DensityOp& x, Index dim_a, Index dim_b, TraceOut which);

/// Tr (A^{1/2} B A^{1/2})^{1/2}.
double fidelity(const PSDOp& a, const PSDOp& b);

/// True when sum_k K_k^dagger K_k = I within tol (operator norm).
bool is_trace_preserving(std::span<const Matrix> kraus, double tol = 1e-10);

/// Entanglement fidelity of rho under the channel with the given square Kraus
/// operators, using the purification sum_i sqrt(lambda_i)|i>|e_i>.
double entanglement_fidelity(const DensityOp& rho, std::span<const Matrix> kraus);

}  // namespace renyi
