#pragma once

// Randomized audits of trace inequalities for the two Renyi families. Each
// audit draws operators from an Ensemble, evaluates both sides of every
// inequality it covers and records the slack
//
//   slack = (side that should be larger) - (side that should be smaller).
//
// A comparison fails when slack < -tolerance * max(1, |larger|, |smaller|).

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "renyi/divergences.hpp"
#include "renyi/ext_real.hpp"
#include "renyi/sampling.hpp"

namespace renyi {

inline constexpr double kAuditTolerance = 1e-9;

struct AuditOptions {
  double tolerance = kAuditTolerance;
  int jobs = 1;
};

struct AuditReport {
  std::string id;
  /// Random instances drawn (summed over dims).
  long samples = 0;
  /// Individual comparisons evaluated.
  long checks = 0;
  double worst_slack = std::numeric_limits<double>::infinity();
  long failures = 0;
  std::vector<double> alpha_grid;
  std::vector<Index> dims;
  std::uint64_t seed = 0;
  double tolerance = kAuditTolerance;

  /// Records larger >= smaller.
  void check(double larger, double smaller);
  /// Same with +inf allowed on either side.
  void check(ExtReal larger, ExtReal smaller);
  bool passed() const { return failures == 0; }
};

/// Sums counts, takes the worse slack and unions the dims. Ids must agree.
AuditReport merge(const AuditReport& a, const AuditReport& b);

/// Tr A^a B^a A^a <= Tr (ABA)^a and its converse with the ||B||^a Tr A^2a
/// factor; directions flip for a > 1. Grid must avoid 0 and 1.
AuditReport audit_alt(const Ensemble& ens, std::span<const double> alphas, const AuditOptions& opt = {});

/// Subadditivity of Tr A^a on [0,1], superadditivity above 1, plus
/// Tr A^a <= (Tr A^0)^(1-a) (Tr A)^a (reversed above 1).
AuditReport audit_rotfeld(const Ensemble& ens, std::span<const double> alphas, const AuditOptions& opt = {});

/// The constant s in Q_new <= s^((1-a)^2) (Tr rho^a)^(1-a) Q_old^a (a < 1;
/// reversed for a > 1), i.e. ||sigma^((1-a)/a)||^(a/(1-a)): the largest
/// eigenvalue of sigma for a < 1 and the smallest positive one for a > 1.
double converse_sigma_constant(const SpectralPair& pair, double alpha);

/// a D_old + log Tr rho - log Tr rho^a + (a-1) log s. With s from
/// converse_sigma_constant this bounds D_new from below for every a != 1.
/// With s = ||sigma|| it is a valid lower bound only for a < 1; commuting
/// pairs with nearly singular sigma violate it for a > 1.
ExtReal old_new_lower_bound(const SpectralPair& pair, const PSDOp& rho, double alpha, double s);

/// D_old >= D_new >= old_new_lower_bound on positive pairs, the refinements
/// through Tr rho^0 (a < 1) and ||rho|| (a > 1), and D_new >= a D_old -
/// (1-a) log d on density pairs for a < 1.
AuditReport audit_old_new_bounds(const Ensemble& ens, std::span<const double> alphas,
                                 const AuditOptions& opt = {});

/// Continuity envelopes around alpha = 1 for c in cs, evaluated at alphas
/// 1 -+ u delta for each u in fractions (all in (0,1)).
AuditReport audit_continuity(const Ensemble& ens, std::span<const double> cs, std::span<const double> fractions,
                             const AuditOptions& opt = {});

/// Mixtures in the first argument: bounds on Q_new, D_new and Q_old, D_old
/// of sum_i g_i rho_i against sigma, with r components.
AuditReport audit_complements(const Ensemble& ens, int r, std::span<const double> alphas,
                              const AuditOptions& opt = {});

/// Joint concavity (new: [1/2,1), old: (0,1)) or convexity (new: (1,inf),
/// old: (1,2]) of Q along random segments. Other alphas throw RangeError.
AuditReport audit_joint_convexity(const Ensemble& ens, std::span<const double> alphas, Family family,
                                  const AuditOptions& opt = {});

/// W -> (Tr (sum_x p(x) W(x)^a)^(1/a))^a, for tuples of positive operators.
double carlen_lieb_functional(std::span<const double> p, std::span<const PSDOp> w, double alpha);

/// Midpoint concavity (a < 1) or convexity (1 < a <= 2) of the functional
/// above. Other alphas throw RangeError.
AuditReport audit_carlen_lieb(const Ensemble& ens, std::span<const double> p, std::span<const double> alphas,
                              const AuditOptions& opt = {});

struct CounterexampleValues {
  ExtReal mixture;
  ExtReal first;
  ExtReal second;
};

/// rho1 = sigma2 = |0><0|, rho2 = sigma1 = |1><1| on a qubit with equal weights:
/// D_new of the mixtures and of the two pairs.
CounterexampleValues counterexample_values(double alpha);

/// True when the values above are (0, +inf, +inf) at alpha = 1.5 and 2, and
/// the mixture value is 0 at alpha = 0.5.
bool counterexample_regression();

struct ConcavitySearch {
  int trials = 0;
  /// Most negative Q(mid) - (Q1 + Q2)/2 found; negative means a violation.
  double worst_slack = std::numeric_limits<double>::infinity();
  std::vector<DensityOp> witness;  // rho1, sigma1, rho2, sigma2
};

/// Random search for a midpoint violation of joint concavity of Q_new.
ConcavitySearch search_joint_concavity_violation(std::uint64_t seed, int trials, double alpha = 0.3, Index dim = 2);

namespace default_grids {
inline const std::vector<double> alt{0.25, 0.5, 0.75, 1.5, 2.0, 3.0};
inline const std::vector<double> rotfeld{0.0, 0.25, 0.5, 1.0, 1.7, 3.0};
inline const std::vector<double> old_new{0.3, 0.7, 1.5, 3.0};
inline const std::vector<double> continuity_c{0.5, 1.0, 2.0};
inline const std::vector<double> continuity_u{0.1, 0.5, 0.9};
inline const std::vector<double> complements{0.4, 0.8, 1.5, 2.5};
inline const std::vector<double> joint_new{0.5, 0.75, 0.9, 1.5, 2.0, 3.0};
inline const std::vector<double> joint_old{0.25, 0.5, 0.75, 1.5, 2.0};
inline const std::vector<double> carlen_lieb{0.3, 0.6, 0.9, 1.3, 1.7, 2.0};
}  // namespace default_grids

struct AuditSuiteConfig {
  std::vector<Index> dims{2, 3, 4};
  int samples = 500;
  std::uint64_t seed = 1;
  double purity_bias = 0.2;
  double tolerance = kAuditTolerance;
  int jobs = 1;
  int mixture_size = 3;
  /// When non-empty, replaces every audit's default grid; each audit keeps
  /// only the points inside its validity range.
  std::vector<double> alpha_grid;
};

/// Every audit over every dim, merged to one report per inequality id.
std::vector<AuditReport> run_audit_suite(const AuditSuiteConfig& cfg);

}  // namespace renyi
