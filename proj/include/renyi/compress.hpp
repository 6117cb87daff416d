#pragma once

// Universal state compression by Neyman-Pearson projections against sigma = I:
//
//   C_n(X) = S X S + |psi><psi| Tr X(I - S),   D_n = id,
//
// with S = {e^(-na) sum_rho rho^(x)n - I > 0}. The rate is (1/n) log Tr S, so
// a plays the role of minus the rate.

#include <span>
#include <vector>

#include "renyi/ext_real.hpp"
#include "renyi/operator.hpp"

namespace renyi {

class CompressionScheme {
public:
  /// s must be a nonzero projection and psi a unit vector with S psi = psi
  /// (tolerance 1e-10); throws InvalidOperator otherwise.
  CompressionScheme(HermitianOp s, Vector psi, int n);

  const HermitianOp& projection() const { return s_; }
  const Vector& psi() const { return psi_; }
  int n() const { return n_; }
  Index dim() const { return s_.dim(); }
  /// Tr S.
  Index rank() const { return rank_; }

  /// Kraus operators {S} and |psi><f_i| for an orthonormal basis f_i of range(I - S).
  std::vector<Matrix> kraus() const;
  /// C_n applied to x.
  HermitianOp apply(const HermitianOp& x) const;

private:
  HermitianOp s_;
  Vector psi_;
  int n_;
  Index rank_;
};

/// psi is the top eigenvector of sum_rho rho^(x)n. Throws DegenerateScheme
/// when S = 0, RangeError for an empty state list, non-finite a or n < 1.
CompressionScheme build_scheme(std::span<const DensityOp> states, double a, int n,
                               std::size_t cap = default_dim_cap());

struct SchemeFidelity {
  double F_e;
  double F;
};

/// Entanglement fidelity and fidelity of rho^(x)n under C_n.
SchemeFidelity scheme_fidelity(const CompressionScheme& scheme, const DensityOp& rho,
                               std::size_t cap = default_dim_cap());

/// F_e of an n-copy state, sqrt((Tr rho S)^2 + ||(I - S) rho psi||^2).
double scheme_entanglement_fidelity(const CompressionScheme& scheme, const DensityOp& rho_n);

/// (1/n) log Tr S.
double compression_rate(const CompressionScheme& scheme);

/// S_t(rho) = log Tr rho^t / (1 - t).
double renyi_entropy(const DensityOp& rho, double t);

/// min over the t grid of ((t-1)/t)(rate - max_rho S_t(rho)). Grid points must
/// lie in (1, t_max]; +inf for an empty grid.
ExtReal compression_converse_bound(double rate, std::span<const DensityOp> states, std::span<const double> t_grid);

/// sum over sequences x of p_x F_e(rho_x1 (x) ... (x) rho_xn) under the
/// scheme. Weights must be a probability vector matching the sources.
double ensemble_fidelity(std::span<const double> weights, std::span<const DensityOp> sources,
                         const CompressionScheme& scheme, std::size_t cap = default_dim_cap());

struct CompressRow {
  int n;
  double a;
  /// False when S = 0; the remaining fields are then NaN.
  bool valid;
  double rate;
  double F_e_worst;
  double F_worst;
};

/// Every (n, a) with 1 <= n <= n_max.
std::vector<CompressRow> compress_sweep(std::span<const DensityOp> states, std::span<const double> a_grid, int n_max,
                                        int jobs = 1, std::size_t cap = default_dim_cap());

}  // namespace renyi
