#include "renyi/channels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "renyi/divergences.hpp"
#include "renyi/errors.hpp"
#include "renyi/net.hpp"
#include "renyi/numeric.hpp"
#include "renyi/parallel.hpp"
#include "renyi/sampling.hpp"

namespace renyi {

namespace {

constexpr double kProbTolerance = 1e-12;
constexpr double kInf = std::numeric_limits<double>::infinity();

void require_alpha(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw RangeError("alpha must be positive and finite");
}

void require_alpha_not_one(double alpha) {
  require_alpha(alpha);
  if (alpha == 1.0) throw RangeError("alpha = 1 is not allowed here");
}

void require_alpha_below_one(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw RangeError("alpha must lie in (0,1)");
}

/// Weights aligned with the alphabet, positive entries only.
struct Support {
  std::vector<double> probs;
  std::vector<const DensityOp*> outputs;
};

Support support_of(const Channel& w, const InputDist& p) {
  Support s;
  const std::vector<double> weights = p.weights(w);
  for (std::size_t i = 0; i < weights.size(); ++i)
    if (weights[i] > 0.0) {
      s.probs.push_back(weights[i]);
      s.outputs.push_back(&w.outputs()[i]);
    }
  return s;
}

PSDOp omega(const Support& s, double alpha) {
  Matrix sum = Matrix::Zero(s.outputs[0]->dim(), s.outputs[0]->dim());
  for (std::size_t i = 0; i < s.probs.size(); ++i) sum += s.probs[i] * support_power(*s.outputs[i], alpha).matrix();
  return support_power(PSDOp(sum, unchecked), 1.0 / alpha);
}

/// log Tr omega, summed in the log domain so that small alpha does not underflow.
double log_trace_omega(const Support& s, double alpha) {
  Matrix sum = Matrix::Zero(s.outputs[0]->dim(), s.outputs[0]->dim());
  for (std::size_t i = 0; i < s.probs.size(); ++i) sum += s.probs[i] * support_power(*s.outputs[i], alpha).matrix();
  const Eigensystem es = eigensystem(HermitianOp(sum, unchecked));
  const double top = es.values.maxCoeff();
  std::vector<double> logs;
  for (Index i = 0; i < es.values.size(); ++i)
    if (is_support_eigenvalue(es.values[i], top)) logs.push_back(std::log(es.values[i]) / alpha);
  return log_sum_exp(logs);
}

Matrix block_diagonal(std::span<const double> probs, std::span<const Matrix> blocks) {
  const Index d = blocks[0].rows();
  const Index k = static_cast<Index>(blocks.size());
  Matrix out = Matrix::Zero(k * d, k * d);
  for (Index i = 0; i < k; ++i) out.block(i * d, i * d, d, d) = probs[static_cast<std::size_t>(i)] * blocks[static_cast<std::size_t>(i)];
  return out;
}

void require_compatible(std::span<const Channel> ws) {
  if (ws.empty()) throw RangeError("at least one channel is required");
  for (const Channel& w : ws) {
    if (w.alphabet() != ws[0].alphabet()) throw DimensionMismatch("channels must share one input alphabet");
    if (w.output_dim() != ws[0].output_dim()) throw DimensionMismatch("channels must share one output dimension");
  }
}

/// sum_x p(x) Q_new(W(x) || sigma) and its gradient in sigma, for full-rank sigma.
class CqNewObjective {
public:
  CqNewObjective(const Support& s, double alpha) : alpha_(alpha), beta_((1.0 - alpha) / alpha), probs_(s.probs) {
    for (const DensityOp* w : s.outputs) roots_.push_back(support_power(*w, 0.5).matrix());
  }

  double value(const Matrix& sigma, Matrix* grad) const {
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (sigma + sigma.adjoint()));
    const RealVector lam = es.eigenvalues().cwiseMax(std::numeric_limits<double>::min());
    const Matrix& u = es.eigenvectors();
    RealVector lb(lam.size());
    for (Index i = 0; i < lam.size(); ++i) lb[i] = std::pow(lam[i], beta_);
    const Matrix sb = u * lb.asDiagonal() * u.adjoint();
    const Index d = sigma.rows();
    Matrix m = Matrix::Zero(d, d);
    double f = 0.0;
    for (std::size_t k = 0; k < roots_.size(); ++k) {
      const Matrix x = roots_[k] * sb * roots_[k];
      Eigen::SelfAdjointEigenSolver<Matrix> ex(0.5 * (x + x.adjoint()));
      const RealVector mu = ex.eigenvalues();
      const double top = std::max(mu.maxCoeff(), 0.0);
      RealVector dm = RealVector::Zero(mu.size());
      double q = 0.0;
      for (Index i = 0; i < mu.size(); ++i)
        if (mu[i] > kZeroThreshold * top) {
          q += std::pow(mu[i], alpha_);
          dm[i] = alpha_ * std::pow(mu[i], alpha_ - 1.0);
        }
      f += probs_[k] * q;
      if (grad) m += probs_[k] * (roots_[k] * ex.eigenvectors() * dm.asDiagonal() * ex.eigenvectors().adjoint() * roots_[k]);
    }
    if (grad) {
      // Daleckii-Krein: derivative of sigma -> sigma^beta, applied to m
      Matrix mt = u.adjoint() * m * u;
      for (Index i = 0; i < d; ++i)
        for (Index j = 0; j < d; ++j) {
          const double gap = lam[i] - lam[j];
          const double g = std::abs(gap) > 1e-12 * std::max(lam[i], lam[j]) ? (lb[i] - lb[j]) / gap
                                                                              : beta_ * std::pow(lam[i], beta_ - 1.0);
          mt(i, j) *= g;
        }
      *grad = u * mt * u.adjoint();
      *grad = 0.5 * (*grad + grad->adjoint());
    }
    return f;
  }

private:
  double alpha_, beta_;
  std::vector<double> probs_;
  std::vector<Matrix> roots_;
};

Matrix herm_log(const Matrix& s) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (s + s.adjoint()));
  RealVector l = es.eigenvalues();
  for (Index i = 0; i < l.size(); ++i) l[i] = std::log(std::max(l[i], 1e-300));
  return es.eigenvectors() * l.asDiagonal() * es.eigenvectors().adjoint();
}

/// exp(h) / Tr exp(h) with eigenvalues kept within 600 of the largest.
Matrix normalized_exp(const Matrix& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (h + h.adjoint()));
  RealVector l = es.eigenvalues();
  const double top = l.maxCoeff();
  double tr = 0.0;
  for (Index i = 0; i < l.size(); ++i) {
    l[i] = std::exp(std::max(l[i] - top, -600.0));
    tr += l[i];
  }
  return es.eigenvectors() * (l / tr).asDiagonal() * es.eigenvectors().adjoint();
}

Matrix full_rank(const Matrix& s) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (s + s.adjoint()), Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() > 1e-12 * es.eigenvalues().maxCoeff()) return s;
  const Index d = s.rows();
  constexpr double eps = 1e-9;
  return (1.0 - eps) * s + (eps / static_cast<double>(d)) * Matrix::Identity(d, d);
}

struct DescentRun {
  double value;
  Matrix sigma;
  int iterations;
  bool converged;
};

DescentRun mirror_descent(const CqNewObjective& obj, double alpha, Matrix sigma, int max_iterations, double tol) {
  const double sign = alpha > 1.0 ? 1.0 : -1.0;
  const auto d_of = [&](double f) { return std::log(f) / (alpha - 1.0); };
  Matrix grad;
  double f = obj.value(sigma, &grad);
  double value = d_of(f);
  double eta = 1.0;
  int it = 0;
  bool converged = false;
  Matrix h = herm_log(sigma);
  while (it < max_iterations) {
    ++it;
    const Matrix step = (sign / f) * grad;
    const Matrix h_next = h - eta * step;
    const Matrix s_next = normalized_exp(h_next);
    Matrix g_next;
    const double f_next = obj.value(s_next, &g_next);
    const double v_next = d_of(f_next);
    if (std::isfinite(v_next) && v_next < value) {
      const double change = value - v_next;
      sigma = s_next;
      h = herm_log(sigma);
      grad = g_next;
      f = f_next;
      value = v_next;
      eta = std::min(eta * 1.5, 1e6);
      if (change < tol) {
        converged = true;
        break;
      }
    } else {
      eta *= 0.5;
      if (eta < 1e-14) {
        converged = true;
        break;
      }
    }
  }
  return {value, sigma, it, converged};
}

}  // namespace

Channel::Channel(std::vector<std::string> alphabet, std::vector<DensityOp> outputs)
    : alphabet_(std::move(alphabet)), outputs_(std::move(outputs)) {
  if (alphabet_.empty()) throw RangeError("channel alphabet must not be empty");
  if (alphabet_.size() != outputs_.size()) throw DimensionMismatch("one output per alphabet symbol is required");
  std::set<std::string> seen;
  for (const std::string& s : alphabet_)
    if (!seen.insert(s).second) throw RangeError("duplicate alphabet symbol '" + s + "'");
  for (const DensityOp& o : outputs_)
    if (o.dim() != outputs_.front().dim()) throw DimensionMismatch("channel outputs must share one dimension");
}

std::size_t Channel::index_of(const std::string& symbol) const {
  const auto it = std::find(alphabet_.begin(), alphabet_.end(), symbol);
  if (it == alphabet_.end()) throw RangeError("symbol '" + symbol + "' is outside the channel alphabet");
  return static_cast<std::size_t>(it - alphabet_.begin());
}

InputDist::InputDist(std::vector<std::string> support, std::vector<double> probs)
    : support_(std::move(support)), probs_(std::move(probs)) {
  if (support_.empty()) throw RangeError("input distribution must have a non-empty support");
  if (support_.size() != probs_.size()) throw DimensionMismatch("one probability per support symbol is required");
  std::set<std::string> seen;
  double total = 0.0;
  for (std::size_t i = 0; i < probs_.size(); ++i) {
    if (!seen.insert(support_[i]).second) throw RangeError("duplicate support symbol '" + support_[i] + "'");
    if (!(probs_[i] > 0.0)) throw RangeError("input probabilities must be positive");
    total += probs_[i];
  }
  if (std::abs(total - 1.0) > kProbTolerance) throw RangeError("input probabilities must sum to 1");
}

InputDist InputDist::uniform(const Channel& w) {
  std::vector<double> probs(w.size(), 1.0 / static_cast<double>(w.size()));
  double total = 0.0;
  for (double q : probs) total += q;
  for (double& q : probs) q /= total;
  return InputDist(w.alphabet(), probs);
}

std::vector<double> InputDist::weights(const Channel& w) const {
  std::vector<double> out(w.size(), 0.0);
  for (std::size_t i = 0; i < support_.size(); ++i) out[w.index_of(support_[i])] = probs_[i];
  return out;
}

HermitianOp CQState::matrix() const {
  std::vector<Matrix> ms;
  for (const DensityOp& b : blocks) ms.push_back(b.matrix());
  return HermitianOp(block_diagonal(probs, ms), unchecked);
}

DensityOp CQState::output_marginal() const {
  Matrix sum = Matrix::Zero(blocks[0].dim(), blocks[0].dim());
  for (std::size_t i = 0; i < blocks.size(); ++i) sum += probs[i] * blocks[i].matrix();
  return DensityOp(sum, unchecked);
}

DensityOp CQState::input_marginal() const { return DensityOp::diagonal(probs); }

CQState cq_state(const Channel& w, const InputDist& p) {
  CQState out;
  for (std::size_t i = 0; i < p.support().size(); ++i) {
    out.probs.push_back(p.probs()[i]);
    out.blocks.push_back(w.output(p.support()[i]));
  }
  return out;
}

DensityOp average_output(const Channel& w, const InputDist& p) { return cq_state(w, p).output_marginal(); }

Channel channel_power(const Channel& w, int n, std::size_t cap) {
  if (n < 1) throw RangeError("extension order must be positive");
  Channel out = w;
  for (int k = 1; k < n; ++k) {
    std::vector<std::string> symbols;
    std::vector<DensityOp> outputs;
    for (std::size_t i = 0; i < out.size(); ++i)
      for (std::size_t j = 0; j < w.size(); ++j) {
        symbols.push_back(out.alphabet()[i] + "," + w.alphabet()[j]);
        outputs.push_back(tensor(out.outputs()[i], w.outputs()[j], cap));
      }
    out = Channel(std::move(symbols), std::move(outputs));
  }
  return out;
}

InputDist input_power(const InputDist& p, int n) {
  if (n < 1) throw RangeError("extension order must be positive");
  std::vector<std::string> support = p.support();
  std::vector<double> probs = p.probs();
  for (int k = 1; k < n; ++k) {
    std::vector<std::string> s2;
    std::vector<double> p2;
    for (std::size_t i = 0; i < support.size(); ++i)
      for (std::size_t j = 0; j < p.support().size(); ++j) {
        s2.push_back(support[i] + "," + p.support()[j]);
        p2.push_back(probs[i] * p.probs()[j]);
      }
    support = std::move(s2);
    probs = std::move(p2);
  }
  double total = 0.0;
  for (double q : probs) total += q;
  for (double& q : probs) q /= total;
  return InputDist(std::move(support), std::move(probs));
}

double holevo(const Channel& w, const InputDist& p) {
  const Support s = support_of(w, p);
  const DensityOp avg = average_output(w, p);
  double out = 0.0;
  for (std::size_t i = 0; i < s.probs.size(); ++i) out += s.probs[i] * umegaki(*s.outputs[i], avg).value();
  return out;
}

double chi_old(const Channel& w, const InputDist& p, double alpha) {
  require_alpha(alpha);
  if (alpha == 1.0) return holevo(w, p);
  return alpha / (alpha - 1.0) * log_trace_omega(support_of(w, p), alpha);
}

SibsonDecomposition sibson_decomposition(const Channel& w, const InputDist& p, const DensityOp& sigma, double alpha) {
  require_alpha(alpha);
  if (sigma.dim() != w.output_dim()) throw DimensionMismatch("sigma does not match the channel output");
  const CQState cq = cq_state(w, p);
  std::vector<Matrix> sigmas(cq.blocks.size(), sigma.matrix());
  const PSDOp lhs(cq.matrix().matrix(), unchecked);
  const PSDOp rhs(block_diagonal(cq.probs, sigmas), unchecked);
  const ExtReal total = d_renyi(lhs, rhs, alpha, Family::Old);
  if (alpha == 1.0) {
    const DensityOp avg = cq.output_marginal();
    return {total, holevo(w, p), umegaki(avg, sigma), avg};
  }
  const PSDOp om = omega(support_of(w, p), alpha);
  const DensityOp bar = DensityOp::normalized(om);
  return {total, alpha / (alpha - 1.0) * log_trace_omega(support_of(w, p), alpha), d_renyi(bar, sigma, alpha, Family::Old),
          bar};
}

double cq_d_new(const Channel& w, const InputDist& p, const DensityOp& sigma, double alpha) {
  require_alpha_not_one(alpha);
  const Support s = support_of(w, p);
  double f = 0.0;
  for (std::size_t i = 0; i < s.probs.size(); ++i) {
    if (alpha > 1.0 && !support_included(*s.outputs[i], sigma)) return kInf;
    f += s.probs[i] * q_new(*s.outputs[i], sigma, alpha);
  }
  return std::log(f) / (alpha - 1.0);
}

ChiNewResult chi_new(const Channel& w, const InputDist& p, double alpha, const ChiNewOptions& opt) {
  require_alpha_not_one(alpha);
  const Support s = support_of(w, p);
  const CqNewObjective obj(s, alpha);
  const Index d = w.output_dim();
  std::vector<Matrix> starts{full_rank(DensityOp::normalized(omega(s, alpha)).matrix())};
  for (const DensityOp& x : opt.starts) {
    if (x.dim() != d) throw DimensionMismatch("starting state does not match the channel output");
    starts.push_back(full_rank(x.matrix()));
  }
  for (int r = 0; r < opt.restarts; ++r) {
    Rng rng = substream(opt.seed, 0x63686e, static_cast<std::uint64_t>(r));
    starts.push_back(random_full_rank_density(rng, d).matrix());
  }
  DescentRun best{kInf, starts[0], 0, false};
  for (const Matrix& s0 : starts) {
    DescentRun run = mirror_descent(obj, alpha, s0, opt.max_iterations, opt.tolerance);
    if (run.value < best.value) best = std::move(run);
  }
  Matrix grad;
  const double f = obj.value(best.sigma, &grad);
  const Matrix gd = grad / (f * (alpha - 1.0));
  const double mean = (best.sigma * gd).trace().real();
  const double residual = (gd - mean * Matrix::Identity(d, d)).norm();
  return {best.value, DensityOp(best.sigma, unchecked), best.iterations, residual, best.converged};
}

double hn_kappa(double c, double alpha) {
  require_alpha_below_one(alpha);
  if (!(c > 0.0)) throw RangeError("c must be positive");
  return std::pow(1.0 + c, alpha) * std::pow(2.0 + c + 1.0 / c, 1.0 - alpha);
}

double hn_bound(const Channel& w, const InputDist& p, long long messages, double alpha, double c) {
  if (messages < 1) throw RangeError("the code size must be at least 1");
  const double kappa = hn_kappa(c, alpha);
  const Support s = support_of(w, p);
  const DensityOp avg = average_output(w, p);
  double q = 0.0;
  for (std::size_t i = 0; i < s.probs.size(); ++i) q += s.probs[i] * q_old(*s.outputs[i], avg, alpha);
  return kappa * std::pow(static_cast<double>(messages), 1.0 - alpha) * q;
}

double compound_exponent(std::span<const Channel> ws, const InputDist& p, double rate, double alpha) {
  require_compatible(ws);
  require_alpha_below_one(alpha);
  double chi_min = kInf;
  for (const Channel& w : ws) chi_min = std::min(chi_min, chi_old(w, p, alpha));
  const double logd = std::log(static_cast<double>(ws[0].output_dim()));
  return (1.0 - alpha) * (alpha * chi_min - rate + (alpha - 1.0) * logd);
}

CompoundBound compound_error_bound(std::span<const Channel> ws, const InputDist& p, double rate, int n, double alpha,
                                   std::size_t cap) {
  require_compatible(ws);
  require_alpha_below_one(alpha);
  if (n < 1) throw RangeError("block length must be positive");
  if (!(rate >= 0.0)) throw RangeError("rate must be non-negative");
  const double r = static_cast<double>(ws.size());
  const double gamma = 1.0 / r;
  const double ga = std::pow(gamma, alpha);
  const double logd = std::log(static_cast<double>(ws[0].output_dim()));
  const double dim_factor = std::exp(n * (alpha - 1.0) * (alpha - 1.0) * logd);
  const InputDist pn = input_power(p, n);

  std::vector<Channel> ext;
  for (const Channel& w : ws) ext.push_back(channel_power(w, n, cap));
  std::vector<DensityOp> bar_outputs;
  for (std::size_t x = 0; x < ext[0].size(); ++x) {
    Matrix m = Matrix::Zero(ext[0].output_dim(), ext[0].output_dim());
    for (const Channel& e : ext) m += gamma * e.outputs()[x].matrix();
    bar_outputs.emplace_back(m, unchecked);
  }
  const Channel bar(ext[0].alphabet(), bar_outputs);
  const DensityOp bar_avg = average_output(bar, pn);
  const Support sb = support_of(bar, pn);

  std::vector<double> chain(8, 0.0);
  for (std::size_t x = 0; x < sb.probs.size(); ++x) {
    chain[0] += sb.probs[x] * q_old(*sb.outputs[x], bar_avg, alpha);
    chain[1] += sb.probs[x] * q_new(*sb.outputs[x], bar_avg, alpha);
  }
  ChiNewOptions opt;
  opt.starts.push_back(bar_avg);
  double chi_min = kInf;
  for (std::size_t i = 0; i < ext.size(); ++i) {
    const Support se = support_of(ext[i], pn);
    double q2 = 0.0;
    for (std::size_t x = 0; x < se.probs.size(); ++x) q2 += se.probs[x] * q_new(*se.outputs[x], bar_avg, alpha);
    chain[2] += ga * q2;
    chain[3] += ga * std::exp((alpha - 1.0) * chi_new(ext[i], pn, alpha, opt).value);
    const DensityOp om = DensityOp::normalized(omega(se, alpha));
    double q4 = 0.0;
    for (std::size_t x = 0; x < se.probs.size(); ++x) q4 += se.probs[x] * q_old(*se.outputs[x], om, alpha);
    chain[4] += ga * std::pow(q4, alpha) * dim_factor;
    chain[5] += ga * std::exp(alpha * (alpha - 1.0) * chi_old(ext[i], pn, alpha)) * dim_factor;
    const double chi1 = chi_old(ws[i], p, alpha);
    chain[6] += ga * std::exp(n * alpha * (alpha - 1.0) * chi1) * dim_factor;
    chi_min = std::min(chi_min, chi1);
  }
  chain[7] = r * std::exp(n * alpha * (alpha - 1.0) * chi_min) * dim_factor;

  const double bound =
      8.0 * r * r * std::exp(n * (alpha - 1.0) * (alpha * chi_min - rate + (alpha - 1.0) * logd));
  const double messages = std::ceil(std::exp(n * rate));
  return {bound, chain, 8.0 * std::pow(messages, 1.0 - alpha) * chain[0]};
}

std::vector<double> chain_slacks(const CompoundBound& b) {
  std::vector<double> out;
  for (std::size_t k = 0; k + 1 < b.chain.size(); ++k) {
    const double diff = b.chain[k + 1] - b.chain[k];
    out.push_back(k == 4 || k == 5 ? -std::abs(diff) : diff);
  }
  return out;
}

RateCertificate compound_rate_certificate(std::span<const Channel> ws, const InputDist& p, double rate) {
  require_compatible(ws);
  if (!(rate >= 0.0)) throw RangeError("rate must be non-negative");
  // the optimum approaches a = 1 as the rate approaches the Holevo quantity
  const std::vector<double> gaps = log_grid(1e-9, 1.0 - 1e-9, 600);
  std::vector<double> grid(gaps.rbegin(), gaps.rend());
  for (double& a : grid) a = 1.0 - a;
  const auto f = [&](double a) { return compound_exponent(ws, p, rate, a); };
  const ScalarMax m = grid_then_golden_maximize(f, grid, 1e-10);
  return {m.value > 0.0, m.arg, m.value};
}

double channel_distance(const Channel& w, const Channel& v) {
  if (w.alphabet() != v.alphabet()) throw DimensionMismatch("channels must share one input alphabet");
  if (w.output_dim() != v.output_dim()) throw DimensionMismatch("channels must share one output dimension");
  double out = 0.0;
  for (std::size_t x = 0; x < w.size(); ++x)
    out = std::max(out, trace_norm(HermitianOp(w.outputs()[x].matrix() - v.outputs()[x].matrix(), unchecked)));
  return out;
}

std::vector<Channel> channel_net(const std::vector<Channel>& pool, double delta) {
  std::vector<Channel> net;
  for (std::size_t i : greedy_net(pool, delta, channel_distance)) net.push_back(pool[i]);
  return net;
}

namespace {

/// Euclidean projection onto the probability simplex.
std::vector<double> project_simplex(std::vector<double> y) {
  std::vector<double> u = y;
  std::sort(u.begin(), u.end(), std::greater<>());
  double cum = 0.0, theta = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    cum += u[k];
    const double t = (cum - 1.0) / static_cast<double>(k + 1);
    if (u[k] - t > 0.0) theta = t;
  }
  for (double& v : y) v = std::max(v - theta, 0.0);
  return y;
}

InputDist dist_from(const Channel& w, const std::vector<double>& q) {
  std::vector<std::string> support;
  std::vector<double> probs;
  double total = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i)
    if (q[i] > 1e-15) {
      support.push_back(w.alphabet()[i]);
      probs.push_back(q[i]);
      total += q[i];
    }
  for (double& v : probs) v /= total;
  return InputDist(std::move(support), std::move(probs));
}

}  // namespace

CapacityEstimate holevo_capacity_heuristic(const Channel& w, double tolerance, int max_iterations) {
  std::vector<double> q(w.size(), 1.0 / static_cast<double>(w.size()));
  InputDist p = dist_from(w, q);
  double value = holevo(w, p);
  double eta = 1.0;
  int it = 0;
  while (it < max_iterations) {
    ++it;
    const DensityOp avg = average_output(w, p);
    std::vector<double> y = q;
    for (std::size_t x = 0; x < w.size(); ++x) {
      const ExtReal g = umegaki(w.outputs()[x], avg);
      y[x] += eta * (g.is_finite() ? g.value() : 1e3);
    }
    const std::vector<double> q_next = project_simplex(y);
    const InputDist p_next = dist_from(w, q_next);
    const double v_next = holevo(w, p_next);
    if (v_next > value) {
      const double gain = v_next - value;
      q = q_next;
      p = p_next;
      value = v_next;
      eta = std::min(eta * 1.5, 1e3);
      if (gain < tolerance) break;
    } else {
      eta *= 0.5;
      if (eta < 1e-12) break;
    }
  }
  return {value, p, it};
}

double chi_new_additivity_gap(const Channel& w, const InputDist& p, double alpha, const ChiNewOptions& opt) {
  return chi_new(channel_power(w, 2), input_power(p, 2), alpha, opt).value - 2.0 * chi_new(w, p, alpha, opt).value;
}

std::vector<ChannelRow> channel_sweep(const Channel& w, const InputDist& p, std::span<const double> alphas,
                                      long long messages, int jobs, const ChiNewOptions& opt) {
  const double logd = std::log(static_cast<double>(w.output_dim()));
  return parallel_map(alphas.size(), jobs, [&](std::size_t i) {
    const double a = alphas[i];
    const double co = chi_old(w, p, a);
    const double cn = a == 1.0 ? co : chi_new(w, p, a, opt).value;
    const double hn = a < 1.0 ? hn_bound(w, p, messages, a) : std::numeric_limits<double>::quiet_NaN();
    return ChannelRow{a, co, cn, co - cn, a * co - std::abs(a - 1.0) * logd, hn};
  });
}

}  // namespace renyi
