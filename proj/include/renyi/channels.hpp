#pragma once

// Classical-quantum channels x -> W(x) on a finite alphabet, alpha-Holevo
// quantities for both Renyi families, the Sibson decomposition, the
// Hayashi-Nagaoka random coding bound and the compound-channel error bound.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "renyi/ext_real.hpp"
#include "renyi/operator.hpp"

namespace renyi {

class Channel {
public:
  /// Symbols must be distinct and non-empty in number, outputs of one dimension.
  Channel(std::vector<std::string> alphabet, std::vector<DensityOp> outputs);

  const std::vector<std::string>& alphabet() const { return alphabet_; }
  const std::vector<DensityOp>& outputs() const { return outputs_; }
  Index output_dim() const { return outputs_.front().dim(); }
  std::size_t size() const { return alphabet_.size(); }
  /// Throws RangeError for a symbol outside the alphabet.
  std::size_t index_of(const std::string& symbol) const;
  const DensityOp& output(const std::string& symbol) const { return outputs_[index_of(symbol)]; }

private:
  std::vector<std::string> alphabet_;
  std::vector<DensityOp> outputs_;
};

/// Finitely supported input distribution.
class InputDist {
public:
  /// Probabilities must be positive and sum to 1 within 1e-12.
  InputDist(std::vector<std::string> support, std::vector<double> probs);
  static InputDist uniform(const Channel& w);

  const std::vector<std::string>& support() const { return support_; }
  const std::vector<double>& probs() const { return probs_; }

  /// Probability of every alphabet symbol of w, zero off the support. Throws
  /// RangeError when the support leaves the alphabet.
  std::vector<double> weights(const Channel& w) const;

private:
  std::vector<std::string> support_;
  std::vector<double> probs_;
};

/// Block-diagonal sum_x p(x) |x><x| (x) W(x), one block per support symbol.
struct CQState {
  std::vector<double> probs;
  std::vector<DensityOp> blocks;

  /// The full operator on C^|supp p| (x) H.
  HermitianOp matrix() const;
  DensityOp output_marginal() const;
  DensityOp input_marginal() const;
};

CQState cq_state(const Channel& w, const InputDist& p);

/// W(p) = sum_x p(x) W(x).
DensityOp average_output(const Channel& w, const InputDist& p);

/// x_1..x_n -> W(x_1) (x) ... (x) W(x_n); symbols joined with ','.
Channel channel_power(const Channel& w, int n, std::size_t cap = default_dim_cap());
InputDist input_power(const InputDist& p, int n);

/// sum_x p(x) D_1(W(x) || W(p)).
double holevo(const Channel& w, const InputDist& p);

/// (alpha/(alpha-1)) log Tr (sum_x p(x) W(x)^alpha)^(1/alpha); alpha = 1 gives holevo().
double chi_old(const Channel& w, const InputDist& p, double alpha);

struct SibsonDecomposition {
  /// D_old(W^(p) || p^ (x) sigma), evaluated on the full cq operators.
  ExtReal total;
  /// (alpha/(alpha-1)) log Tr omega(p).
  double rate_term;
  /// D_old(omega_bar || sigma).
  ExtReal residual_div;
  DensityOp omega_bar;
};

SibsonDecomposition sibson_decomposition(const Channel& w, const InputDist& p, const DensityOp& sigma, double alpha);

struct ChiNewOptions {
  int restarts = 3;
  int max_iterations = 2000;
  double tolerance = 1e-10;
  std::uint64_t seed = 0;
  /// Extra starting points, tried besides omega_bar and the random restarts.
  std::vector<DensityOp> starts;
};

struct ChiNewResult {
  double value;
  DensityOp argmin;
  int iterations;
  /// Frobenius norm of the gradient of D_new in sigma with its trace part removed.
  double residual;
  bool converged;
};

/// D_new(W^(p) || p^ (x) sigma) = (1/(alpha-1)) log sum_x p(x) Q_new(W(x) || sigma).
double cq_d_new(const Channel& w, const InputDist& p, const DensityOp& sigma, double alpha);

/// inf over sigma of cq_d_new by mirror descent, sigma ~ exp(H), started at
/// omega_bar, the extra starts and random states. Not converging within
/// max_iterations is reported through `converged`, with the best value found.
ChiNewResult chi_new(const Channel& w, const InputDist& p, double alpha, const ChiNewOptions& opt = {});

/// (1+c)^alpha (2+c+1/c)^(1-alpha).
double hn_kappa(double c, double alpha);

/// kappa(c, alpha) M^(1-alpha) Tr W^(p)^alpha (p^ (x) W(p))^(1-alpha).
double hn_bound(const Channel& w, const InputDist& p, long long messages, double alpha, double c = 1.0);

/// Values of the chain bounding Q_old of the averaged channel by the
/// compound exponent, gamma uniform over the channels, in order:
///   0  Q_old(W_bar^(p^n) || p^n (x) W_bar_n(p^n))
///   1  Q_new of the same pair
///   2  sum_i gamma^a Q_new(W_i^(p^n) || p^n (x) W_bar_n(p^n))
///   3  sum_i gamma^a sup_sigma Q_new(W_i^(p^n) || p^n (x) sigma)
///   4  sum_i gamma^a (sup_sigma Q_old(W_i^(p^n) || p^n (x) sigma))^a d^(n(a-1)^2)
///   5  sum_i gamma^a exp(a(a-1) chi_old(W_i^n, p^n)) d^(n(a-1)^2)
///   6  sum_i gamma^a exp(n a(a-1) chi_old(W_i, p)) d^(n(a-1)^2)
///   7  |I| exp(n a(a-1) min_i chi_old(W_i, p)) d^(n(a-1)^2)
/// Each value is at most the next; 4, 5 and 6 agree.
struct CompoundBound {
  double bound;
  std::vector<double> chain;
  /// 8 M^(1-a) chain[0] with M = ceil(e^(nR)).
  double n_shot;
};

/// 8|I|^2 exp[n(a-1)(a min_i chi_old(W_i,p) - R + (a-1) log d)] and the chain
/// above. The sup in line 3 comes from chi_new and is a lower estimate.
CompoundBound compound_error_bound(std::span<const Channel> ws, const InputDist& p, double rate, int n, double alpha,
                                   std::size_t cap = default_dim_cap());

/// chain[k+1] - chain[k], with -|difference| for the three equalities.
std::vector<double> chain_slacks(const CompoundBound& b);

/// Per-letter decay exponent (1-a)(a min_i chi_old(W_i,p) - R + (a-1) log d).
double compound_exponent(std::span<const Channel> ws, const InputDist& p, double rate, double alpha);

struct RateCertificate {
  bool feasible;
  double alpha_star;
  double exponent;
};

/// Maximizes compound_exponent over a in (0,1); feasible when the maximum is
/// positive.
RateCertificate compound_rate_certificate(std::span<const Channel> ws, const InputDist& p, double rate);

/// max_x ||W(x) - V(x)||_1. Alphabets and output dims must agree.
double channel_distance(const Channel& w, const Channel& v);
/// Greedy delta-net of the pool under channel_distance.
std::vector<Channel> channel_net(const std::vector<Channel>& pool, double delta);

struct CapacityEstimate {
  double value;
  InputDist p;
  int iterations;
};

/// Projected gradient ascent of holevo() over the alphabet simplex. A local
/// search; global optimality is not certified.
CapacityEstimate holevo_capacity_heuristic(const Channel& w, double tolerance = 1e-8, int max_iterations = 5000);

/// chi_new(W^(x)2, p^(x)2) - 2 chi_new(W, p).
double chi_new_additivity_gap(const Channel& w, const InputDist& p, double alpha, const ChiNewOptions& opt = {});

struct ChannelRow {
  double alpha;
  double chi_old;
  double chi_new;
  double gap;
  /// alpha chi_old - |alpha-1| log d.
  double chi_lower;
  /// hn_bound with c = 1 for alpha < 1, NaN otherwise.
  double hn_bound;
};

std::vector<ChannelRow> channel_sweep(const Channel& w, const InputDist& p, std::span<const double> alphas,
                                      long long messages = 2, int jobs = 1, const ChiNewOptions& opt = {});

}  // namespace renyi
