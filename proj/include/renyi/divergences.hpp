#pragma once

// Renyi divergences of positive semidefinite operators, both the Petz-type
// ("old") and the sandwiched ("new") family, with their alpha limits.
//
// Alpha ranges over [0, inf]; pass std::numeric_limits<double>::infinity()
// for the max-divergence end. Every logarithm is natural.

#include <string_view>

#include "renyi/ext_real.hpp"
#include "renyi/operator.hpp"

namespace renyi {

enum class Family { Old, New };

std::string_view to_string(Family f);

/// The new family at alpha = 0 has no closed form; it is evaluated at this
/// alpha instead.
inline constexpr double kNewFamilyZeroSurrogate = 1e-4;

/// True when d_renyi(..., alpha, family) is a numerical stand-in for a limit
/// rather than an exact value.
bool is_numerical_limit(Family family, double alpha);

/// Spectral data of a pair (rho, sigma) restricted to the supports. All
/// Q-quantities are computed from it; build it once when sweeping alpha.
class SpectralPair {
public:
  SpectralPair(const PSDOp& rho, const PSDOp& sigma);

  Index dim() const { return dim_; }
  bool support_included() const { return support_included_; }
  double trace_rho() const { return trace_rho_; }
  /// Largest eigenvalue of sigma.
  double sigma_norm() const { return s_.maxCoeff(); }
  /// Smallest positive eigenvalue of sigma.
  double sigma_min() const { return s_.minCoeff(); }

  /// log Tr rho^a sigma^(1-a); -inf when the product vanishes.
  double log_q_old(double alpha) const;
  /// log Tr (sigma^s rho sigma^s)^a with s = (1-a)/(2a); -inf when zero.
  double log_q_new(double alpha) const;

  /// (1/Tr rho) Tr rho (log rho - log sigma); requires support inclusion.
  double relative_entropy() const;
  /// log of the largest eigenvalue of sigma^(-1/2) rho sigma^(-1/2) on supp sigma.
  double log_max_ratio() const;
  /// log max{r/s : eigenspaces of rho at r and of sigma at s overlap}.
  double log_max_overlap_ratio() const;

private:
  Index dim_;
  RealVector r_, s_;
  Matrix overlap_;  // W^dagger U: rows index sigma's support, columns rho's
  RealVector log_r_, log_s_;
  double trace_rho_;
  bool support_included_;
};

double q_old(const PSDOp& rho, const PSDOp& sigma, double alpha);
double q_new(const PSDOp& rho, const PSDOp& sigma, double alpha);
double log_q_old(const PSDOp& rho, const PSDOp& sigma, double alpha);
double log_q_new(const PSDOp& rho, const PSDOp& sigma, double alpha);

ExtReal d_renyi(const PSDOp& rho, const PSDOp& sigma, double alpha, Family family);
ExtReal d_renyi(const SpectralPair& pair, double alpha, Family family);

/// Accepts any positive semidefinite pair including zero operators:
/// rho = 0 throws UndefinedInput, sigma = 0 gives +inf.
ExtReal d_renyi(const HermitianOp& rho, const HermitianOp& sigma, double alpha, Family family);

ExtReal umegaki(const PSDOp& rho, const PSDOp& sigma);
ExtReal d_max(const PSDOp& rho, const PSDOp& sigma);

/// (1/(1-a)) (log Tr rho^a - log Tr rho) with the alpha = 0, 1, inf limits.
double renyi_entropy(const PSDOp& rho, double alpha);

/// Continuity bounds around alpha = 1 for a pair with supp rho <= supp sigma.
/// The bound functions accept alpha in (1-delta, 1) or (1, 1+delta).
class TcrEnvelope {
public:
  TcrEnvelope(const PSDOp& rho, const PSDOp& sigma, double c);

  double eta() const { return eta_; }
  double delta() const { return delta_; }
  double c() const { return c_; }
  double relative_entropy() const { return d1_; }

  double lower_old(double alpha) const;
  double upper_old(double alpha) const;
  double lower_new(double alpha) const;
  double upper_new(double alpha) const;

private:
  double gap(double alpha) const;
  void check_alpha(double alpha) const;

  double eta_, delta_, c_, d1_;
  double log_trace_rho_, log_sigma_norm_;
  RealVector rho_spectrum_;
};

}  // namespace renyi
