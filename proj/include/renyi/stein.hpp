#pragma once

// Composite hypothesis testing on tensor powers: Neyman-Pearson tests, exact
// error probabilities, the exponent functions psi / phi / phi_hat and the
// finite-n and strong-converse bounds built from them.

#include <span>
#include <vector>

#include "renyi/divergences.hpp"
#include "renyi/numeric.hpp"
#include "renyi/operator.hpp"

namespace renyi {

/// Null states N and alternative sigma with supp rho <= supp sigma for all rho.
class HypothesisFamily {
public:
  /// Throws RangeError for an empty family, DimensionMismatch for mixed
  /// dimensions and SupportViolation when a support condition fails.
  HypothesisFamily(std::vector<DensityOp> null_states, PSDOp sigma);

  const std::vector<DensityOp>& null_states() const { return null_; }
  const PSDOp& sigma() const { return sigma_; }
  Index dim() const { return sigma_.dim(); }
  std::size_t size() const { return null_.size(); }

  /// min_rho D_1(rho || sigma).
  double relative_entropy_distance() const;

private:
  std::vector<DensityOp> null_;
  PSDOp sigma_;
};

/// An operator with 0 <= T <= I.
class TestOp {
public:
  /// Throws InvalidOperator when the spectrum leaves [0,1] by more than 1e-10.
  explicit TestOp(HermitianOp t);
  const HermitianOp& op() const { return t_; }
  Index dim() const { return t_.dim(); }

private:
  HermitianOp t_;
};

/// {e^(-na) sum_i rho_i^(x)n - sigma^(x)n > 0}. a must be finite.
TestOp np_test(std::span<const DensityOp> rhos, const PSDOp& sigma, double a, int n,
               std::size_t cap = default_dim_cap());

struct ErrorPair {
  double type_I;
  double type_II;
};

/// max_rho Tr rho^(x)n (I - T) and Tr sigma^(x)n T.
ErrorPair error_pair(const TestOp& test, const HypothesisFamily& family, int n, std::size_t cap = default_dim_cap());

/// Grid used for sup over t in (0,1].
inline constexpr double kLegendreTMin = 1e-6;
inline constexpr int kLegendreGrid = 1024;
inline constexpr double kLegendreTol = 1e-8;

class ExponentFunctions {
public:
  explicit ExponentFunctions(const HypothesisFamily& family);

  /// max_rho log Q_t^new(rho || sigma), t > 0.
  double psi(double t) const;
  /// sup_{t in (0,1]} (a t - psi(t)) with the maximizing t.
  ScalarMax phi_argmax(double a) const;
  double phi(double a) const { return phi_argmax(a).value; }
  double phi_hat(double a) const { return phi(a) - a; }

private:
  std::vector<SpectralPair> pairs_;
  std::vector<double> grid_;
};

struct FiniteNBounds {
  double bound_type_I;
  double bound_type_II;
};

/// (|N| e^(-n phi_hat(a)) + n delta, |N| e^(-n phi(a))).
FiniteNBounds finite_n_bounds(const ExponentFunctions& ef, double a, int n, std::size_t net_size,
                              double net_radius = 0.0);

/// Greedy maximal delta-separated subset of pool in trace distance.
std::vector<DensityOp> build_net(const std::vector<DensityOp>& pool, double delta);
/// max over pool of the trace distance to the nearest net element.
double covering_radius(const std::vector<DensityOp>& pool, const std::vector<DensityOp>& net);
/// Real dimension of the Hermitian operators on C^dim, used in the net size bound.
inline double hermitian_real_dimension(Index dim) { return static_cast<double>(dim * dim); }

inline constexpr double kStrongConverseTMax = 50.0;

/// inf_{t in (1, t_max]} ((t-1)/t) (-r + min_rho D_t^new(rho || sigma)), with the minimizing t.
ScalarMax strong_converse_bound(const HypothesisFamily& family, double r, double t_max = kStrongConverseTMax);

/// One step of a correlated sequence: null states rho_{i,n} and sigma_n on
/// the same space.
struct CorrelatedStep {
  int n;
  std::vector<DensityOp> rhos;
  PSDOp sigma;
};

struct CorrelatedRow {
  int n;
  ErrorPair errors;
  /// r exp(-n sup_t {a(t-1) - psi_n(t)}) and r exp(-n sup_t {a t - psi_n(t)}),
  /// sup over the t grid, psi_n(t) = max_i (1/n) log Q_t^new(rho_{i,n} || sigma_n).
  double bound_type_I;
  double bound_type_II;
  std::vector<double> psi;  // psi_n on the t grid
  /// (psi_i(1) - psi_i(1-h))/h per i, psi_i(t) = (1/n) log Q_t^old, and its
  /// Richardson extrapolation from steps h and h/2.
  std::vector<double> left_derivative;
  std::vector<double> left_derivative_richardson;
  /// (1/n) D_1(rho_{i,n} || sigma_n) per i.
  std::vector<double> relative_entropy_rate;
};

/// t grid must lie in (0,1]. Throws DimensionMismatch when a step is
/// inconsistent and SupportViolation when a support condition fails.
std::vector<CorrelatedRow> correlated_bounds(std::span<const CorrelatedStep> steps, double a,
                                             std::span<const double> t_grid, double h = 1e-4);

/// sum_i g_i rho_i^(x)n.
PSDOp averaged_mixture(std::span<const DensityOp> rhos, std::span<const double> gammas, int n,
                       std::size_t cap = default_dim_cap());

/// min over components with positive weight of D_1(rho_i || sigma).
ExtReal averaged_rate(std::span<const DensityOp> rhos, std::span<const double> gammas, const PSDOp& sigma);

struct SteinRow {
  int n;
  double a;
  ErrorPair errors;
  FiniteNBounds bounds;
  double phi;
  double phi_hat;
};

/// Every (n, a) with 1 <= n <= n_max, finite null family used directly.
std::vector<SteinRow> stein_sweep(const HypothesisFamily& family, std::span<const double> a_grid, int n_max,
                                  int jobs = 1, std::size_t cap = default_dim_cap());

}  // namespace renyi
