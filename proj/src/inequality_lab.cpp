#include "renyi/inequality_lab.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "renyi/errors.hpp"
#include "renyi/parallel.hpp"

namespace renyi {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum Stream : std::uint64_t {
  kAlt = 1,
  kRotfeld,
  kOldNew,
  kContinuity,
  kComplements,
  kJointNew,
  kJointOld,
  kCarlenLieb,
  kConcavitySearch,
};

bool is_one_of_finite_positive(double a) { return std::isfinite(a) && a > 0.0 && a != 1.0; }

void require(bool ok, const std::string& what, double alpha) {
  if (!ok) throw RangeError(what + ": alpha " + std::to_string(alpha) + " outside the valid range");
}

/// a x + b for a > 0 on extended reals.
ExtReal affine(double a, ExtReal x, double b) {
  return x.is_infinite() ? ExtReal::infinity() : ExtReal(a * x.value() + b);
}

PSDOp psd(Matrix m) { return PSDOp(std::move(m), unchecked); }

/// Evaluates one sample per index on a per-sample substream and folds the
/// partial reports in index order.
AuditReport run_samples(std::string id, const Ensemble& ens, Stream stream, std::vector<double> alphas,
                        const AuditOptions& opt, const std::function<void(Rng&, AuditReport&)>& sample) {
  if (ens.count < 0) throw RangeError("ensemble count must be non-negative");
  const std::uint64_t stream_id = static_cast<std::uint64_t>(stream) * 4096 + static_cast<std::uint64_t>(ens.dim);
  auto parts = parallel_map(static_cast<std::size_t>(ens.count), opt.jobs, [&](std::size_t i) {
    AuditReport part;
    part.tolerance = opt.tolerance;
    Rng rng = substream(ens.seed, stream_id, i);
    sample(rng, part);
    return part;
  });
  AuditReport out;
  out.id = std::move(id);
  out.alpha_grid = std::move(alphas);
  out.dims = {ens.dim};
  out.seed = ens.seed;
  out.tolerance = opt.tolerance;
  out.samples = ens.count;
  for (const AuditReport& p : parts) {
    out.checks += p.checks;
    out.failures += p.failures;
    out.worst_slack = std::min(out.worst_slack, p.worst_slack);
  }
  return out;
}

PSDOp draw_psd(Rng& rng, const Ensemble& ens) { return random_psd(rng, ens.dim, random_rank(rng, ens)); }

}  // namespace

void AuditReport::check(double larger, double smaller) {
  ++checks;
  const double slack = larger - smaller;
  if (std::isnan(slack)) {
    ++failures;
    worst_slack = -kInf;
    return;
  }
  worst_slack = std::min(worst_slack, slack);
  const double scale = std::max({1.0, std::abs(larger), std::abs(smaller)});
  if (slack < -tolerance * scale) ++failures;
}

void AuditReport::check(ExtReal larger, ExtReal smaller) {
  if (larger.is_infinite()) {
    ++checks;
    return;
  }
  if (smaller.is_infinite()) {
    ++checks;
    ++failures;
    worst_slack = -kInf;
    return;
  }
  check(larger.value(), smaller.value());
}

AuditReport merge(const AuditReport& a, const AuditReport& b) {
  if (a.id != b.id) throw RangeError("merge: reports " + a.id + " and " + b.id + " differ");
  AuditReport out = a;
  out.samples += b.samples;
  out.checks += b.checks;
  out.failures += b.failures;
  out.worst_slack = std::min(a.worst_slack, b.worst_slack);
  for (Index d : b.dims)
    if (std::find(out.dims.begin(), out.dims.end(), d) == out.dims.end()) out.dims.push_back(d);
  return out;
}

AuditReport audit_alt(const Ensemble& ens, std::span<const double> alphas, const AuditOptions& opt) {
  for (double a : alphas) require(is_one_of_finite_positive(a), "audit_alt", a);
  const std::vector<double> grid(alphas.begin(), alphas.end());
  return run_samples("alt", ens, kAlt, grid, opt, [&](Rng& rng, AuditReport& rep) {
    const PSDOp a = draw_psd(rng, ens);
    const PSDOp b = draw_psd(rng, ens);
    const HermitianOp aba(a.matrix() * b.matrix() * a.matrix(), unchecked);
    const double b_norm = operator_norm(b);
    for (double alpha : grid) {
      const Matrix aa = support_power(a, alpha).matrix();
      const double inner = (aa * support_power(b, alpha).matrix() * aa).trace().real();
      const double outer = trace_power(aba, alpha);
      const double converse =
          std::pow(std::pow(b_norm, alpha) * trace_power(a, 2.0 * alpha), 1.0 - alpha) * std::pow(inner, alpha);
      if (alpha < 1.0) {
        rep.check(outer, inner);
        rep.check(converse, outer);
      } else {
        rep.check(inner, outer);
        rep.check(outer, converse);
      }
    }
  });
}

AuditReport audit_rotfeld(const Ensemble& ens, std::span<const double> alphas, const AuditOptions& opt) {
  for (double a : alphas) require(std::isfinite(a) && a >= 0.0, "audit_rotfeld", a);
  const std::vector<double> grid(alphas.begin(), alphas.end());
  return run_samples("rotfeld", ens, kRotfeld, grid, opt, [&](Rng& rng, AuditReport& rep) {
    const PSDOp a = draw_psd(rng, ens);
    const PSDOp b = draw_psd(rng, ens);
    const PSDOp sum = a + b;
    for (double alpha : grid) {
      const double joint = trace_power(sum, alpha);
      const double split = trace_power(a, alpha) + trace_power(b, alpha);
      if (alpha <= 1.0) rep.check(split, joint);
      if (alpha >= 1.0) rep.check(joint, split);
      if (alpha == 0.0 || alpha == 1.0) continue;
      for (const PSDOp* x : {&a, &b}) {
        const double power = trace_power(*x, alpha);
        const double bound = std::pow(trace_power(*x, 0.0), 1.0 - alpha) * std::pow(x->trace(), alpha);
        if (alpha < 1.0)
          rep.check(bound, power);
        else
          rep.check(power, bound);
      }
    }
  });
}

double converse_sigma_constant(const SpectralPair& pair, double alpha) {
  return alpha < 1.0 ? pair.sigma_norm() : pair.sigma_min();
}

ExtReal old_new_lower_bound(const SpectralPair& pair, const PSDOp& rho, double alpha, double s) {
  const ExtReal d_old = d_renyi(pair, alpha, Family::Old);
  return affine(alpha, d_old,
                std::log(pair.trace_rho()) - std::log(trace_power(rho, alpha)) + (alpha - 1.0) * std::log(s));
}

AuditReport audit_old_new_bounds(const Ensemble& ens, std::span<const double> alphas, const AuditOptions& opt) {
  for (double a : alphas) require(is_one_of_finite_positive(a), "audit_old_new_bounds", a);
  const std::vector<double> grid(alphas.begin(), alphas.end());
  const double log_dim = std::log(static_cast<double>(ens.dim));
  return run_samples("old_new_bounds", ens, kOldNew, grid, opt, [&](Rng& rng, AuditReport& rep) {
    const PSDOp rho = draw_psd(rng, ens);
    const PSDOp sigma = draw_psd(rng, ens);
    const DensityOp rho_s = random_density(rng, ens);
    const DensityOp sigma_s = random_full_rank_density(rng, ens.dim);
    const SpectralPair pair(rho, sigma), pair_s(rho_s, sigma_s);
    for (const auto& [r, p] : {std::pair<const PSDOp&, const SpectralPair&>{rho, pair}, {rho_s, pair_s}}) {
      const double log_tr = std::log(r.trace());
      const double log_rank = std::log(trace_power(r, 0.0));
      const double log_rho_norm = std::log(operator_norm(r));
      for (double alpha : grid) {
        const double s = converse_sigma_constant(p, alpha);
        const ExtReal d_old = d_renyi(p, alpha, Family::Old);
        const ExtReal d_new = d_renyi(p, alpha, Family::New);
        rep.check(d_old, d_new);
        rep.check(d_new, old_new_lower_bound(p, r, alpha, s));
        if (alpha < 1.0)
          rep.check(d_new, affine(alpha, d_old, (1.0 - alpha) * (log_tr - log_rank - std::log(s))));
        else
          rep.check(d_new, affine(alpha, d_old, (alpha - 1.0) * (std::log(s) - log_rho_norm)));
      }
    }
    for (double alpha : grid) {
      if (alpha > 1.0) continue;
      const ExtReal s_old = d_renyi(pair_s, alpha, Family::Old);
      const ExtReal s_new = d_renyi(pair_s, alpha, Family::New);
      rep.check(s_new, affine(alpha, s_old, -(1.0 - alpha) * log_dim));
      rep.check(s_new, affine(alpha, s_old, -(1.0 - alpha) * std::log(trace_power(rho_s, 0.0))));
    }
  });
}

AuditReport audit_continuity(const Ensemble& ens, std::span<const double> cs, std::span<const double> fractions,
                             const AuditOptions& opt) {
  for (double c : cs)
    if (!(c > 0.0)) throw RangeError("audit_continuity: c must be positive");
  for (double u : fractions)
    if (!(u > 0.0 && u < 1.0)) throw RangeError("audit_continuity: fractions must lie in (0,1)");
  const std::vector<double> c_grid(cs.begin(), cs.end()), u_grid(fractions.begin(), fractions.end());
  const double log_dim = std::log(static_cast<double>(ens.dim));
  return run_samples("continuity", ens, kContinuity, c_grid, opt, [&](Rng& rng, AuditReport& rep) {
    const DensityOp rho = random_density(rng, ens);
    const DensityOp sigma = random_full_rank_density(rng, ens.dim);
    const SpectralPair pair(rho, sigma);
    for (double c : c_grid) {
      const TcrEnvelope env(rho, sigma, c);
      const double d1 = env.relative_entropy();
      const double log_eta = std::log(env.eta());
      for (double u : u_grid) {
        const double below = 1.0 - u * env.delta(), above = 1.0 + u * env.delta();
        const double old_b = d_renyi(pair, below, Family::Old).value();
        const double new_b = d_renyi(pair, below, Family::New).value();
        rep.check(d1, old_b);
        rep.check(old_b, env.lower_old(below));
        rep.check(d1, new_b);
        rep.check(new_b, env.lower_new(below));
        rep.check(new_b, below * d1 - (1.0 - below) * (4.0 * below * log_eta * log_eta * std::cosh(c) + log_dim));

        const double old_a = d_renyi(pair, above, Family::Old).value();
        const double new_a = d_renyi(pair, above, Family::New).value();
        rep.check(old_a, d1);
        rep.check(env.upper_old(above), old_a);
        rep.check(new_a, d1);
        rep.check(env.upper_new(above), new_a);
      }
    }
  });
}

AuditReport audit_complements(const Ensemble& ens, int r, std::span<const double> alphas, const AuditOptions& opt) {
  if (r < 1) throw RangeError("audit_complements: need at least one component");
  for (double a : alphas) require(is_one_of_finite_positive(a), "audit_complements", a);
  const std::vector<double> grid(alphas.begin(), alphas.end());
  return run_samples("complements", ens, kComplements, grid, opt, [&](Rng& rng, AuditReport& rep) {
    const PSDOp sigma = random_psd(rng, ens.dim, ens.dim);
    std::vector<PSDOp> rhos;
    for (int i = 0; i < r; ++i) rhos.push_back(draw_psd(rng, ens));
    const std::vector<double> gamma = random_simplex(rng, r);
    std::vector<double> loose(gamma.size());
    std::normal_distribution<double> n01(0.0, 1.0);
    for (double& g : loose) g = std::exp(n01(rng));

    auto combine = [&](const std::vector<double>& w) {
      Matrix m = Matrix::Zero(ens.dim, ens.dim);
      for (int i = 0; i < r; ++i) m += w[static_cast<std::size_t>(i)] * rhos[static_cast<std::size_t>(i)].matrix();
      return psd(std::move(m));
    };
    const PSDOp mix = combine(gamma), loose_mix = combine(loose);
    const double gamma_min = *std::min_element(gamma.begin(), gamma.end());

    std::vector<SpectralPair> pairs;
    for (const PSDOp& rho : rhos) pairs.emplace_back(rho, sigma);
    const SpectralPair mix_pair(mix, sigma), loose_pair(loose_mix, sigma);

    auto mixture_bounds = [&](double alpha) {
      double lo = kInf, hi = -kInf;
      for (const SpectralPair& p : pairs) {
        const double d = d_renyi(p, alpha, Family::New).value();
        lo = std::min(lo, d);
        hi = std::max(hi, d);
      }
      const double d_mix = d_renyi(mix_pair, alpha, Family::New).value();
      rep.check(d_mix, lo + std::log(gamma_min));
      rep.check(hi, d_mix);
    };
    mixture_bounds(1.0);
    mixture_bounds(kInf);

    for (double alpha : grid) {
      const double log_s = std::log(converse_sigma_constant(mix_pair, alpha));
      double linear = 0.0, powered = 0.0, loose_powered = 0.0, old_bound = 0.0;
      double old_min = kInf, old_log_min = kInf, old_rank_log_min = kInf;
      for (int i = 0; i < r; ++i) {
        const auto k = static_cast<std::size_t>(i);
        const double qn = std::exp(pairs[k].log_q_new(alpha));
        const double qo = std::exp(pairs[k].log_q_old(alpha));
        const double tr = rhos[k].trace();
        const double tr_pow = trace_power(rhos[k], alpha);
        const double rank = trace_power(rhos[k], 0.0);
        linear += gamma[k] * qn;
        powered += std::pow(gamma[k], alpha) * qn;
        loose_powered += std::pow(loose[k], alpha) * qn;
        old_bound += std::pow(gamma[k], alpha) * std::pow(qo, alpha) *
                     std::exp((1.0 - alpha) * (1.0 - alpha) * log_s) * std::pow(tr_pow, 1.0 - alpha);
        old_min = std::min(old_min, d_renyi(pairs[k], alpha, Family::Old).value());
        old_log_min = std::min(old_log_min, std::log(gamma[k] * tr / tr_pow));
        old_rank_log_min =
            std::min(old_rank_log_min, std::log(gamma[k]) + (1.0 - alpha) * std::log(tr) + (alpha - 1.0) * std::log(rank));
      }
      const double q_mix = std::exp(mix_pair.log_q_new(alpha));
      const double q_loose = std::exp(loose_pair.log_q_new(alpha));
      const double q_old_mix = std::exp(mix_pair.log_q_old(alpha));
      if (alpha < 1.0) {
        rep.check(q_mix, linear);
        rep.check(powered, q_mix);
        rep.check(loose_powered, q_loose);
        rep.check(old_bound, q_old_mix);
      } else {
        rep.check(linear, q_mix);
        rep.check(q_mix, powered);
        rep.check(q_loose, loose_powered);
        rep.check(q_old_mix, old_bound);
      }
      mixture_bounds(alpha);
      const double d_old_mix = d_renyi(mix_pair, alpha, Family::Old).value();
      rep.check(d_old_mix, alpha * old_min + (alpha - 1.0) * log_s + old_log_min);
      if (alpha < 1.0) rep.check(d_old_mix, alpha * old_min + (alpha - 1.0) * log_s + old_rank_log_min);
    }
  });
}

AuditReport audit_joint_convexity(const Ensemble& ens, std::span<const double> alphas, Family family,
                                  const AuditOptions& opt) {
  for (double a : alphas) {
    const bool ok = family == Family::New ? (a >= 0.5 && a < 1.0) || (a > 1.0 && std::isfinite(a))
                                          : (a > 0.0 && a < 1.0) || (a > 1.0 && a <= 2.0);
    require(ok, "audit_joint_convexity", a);
  }
  const std::vector<double> grid(alphas.begin(), alphas.end());
  const bool any_convex = std::any_of(grid.begin(), grid.end(), [](double a) { return a > 1.0; });
  const Stream stream = family == Family::New ? kJointNew : kJointOld;
  const std::string id = std::string("joint_convexity_") + std::string(to_string(family));
  return run_samples(id, ens, stream, grid, opt, [&](Rng& rng, AuditReport& rep) {
    // full-rank second arguments keep the convex range free of +inf
    auto second = [&] { return any_convex ? random_psd(rng, ens.dim, ens.dim) : draw_psd(rng, ens); };
    const PSDOp rho1 = draw_psd(rng, ens), sigma1 = second();
    const PSDOp rho2 = draw_psd(rng, ens), sigma2 = second();
    const double lambda = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    const PSDOp rho = psd(lambda * rho1.matrix() + (1.0 - lambda) * rho2.matrix());
    const PSDOp sigma = psd(lambda * sigma1.matrix() + (1.0 - lambda) * sigma2.matrix());
    const SpectralPair p1(rho1, sigma1), p2(rho2, sigma2), pm(rho, sigma);
    auto q = [&](const SpectralPair& p, double a) {
      return std::exp(family == Family::New ? p.log_q_new(a) : p.log_q_old(a));
    };
    for (double alpha : grid) {
      const double mixed = q(pm, alpha);
      const double averaged = lambda * q(p1, alpha) + (1.0 - lambda) * q(p2, alpha);
      if (alpha < 1.0)
        rep.check(mixed, averaged);
      else
        rep.check(averaged, mixed);
    }
  });
}

double carlen_lieb_functional(std::span<const double> p, std::span<const PSDOp> w, double alpha) {
  if (p.size() != w.size() || w.empty()) throw DimensionMismatch("carlen_lieb_functional: p and W sizes differ");
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw RangeError("carlen_lieb_functional: alpha must be positive");
  const Index d = w.front().dim();
  Matrix sum = Matrix::Zero(d, d);
  for (std::size_t x = 0; x < w.size(); ++x) {
    if (w[x].dim() != d) throw DimensionMismatch("carlen_lieb_functional: operators of different dimension");
    if (p[x] < 0.0) throw RangeError("carlen_lieb_functional: negative weight");
    if (p[x] > 0.0) sum += p[x] * support_power(w[x], alpha).matrix();
  }
  return std::pow(trace_power(HermitianOp(sum, unchecked), 1.0 / alpha), alpha);
}

AuditReport audit_carlen_lieb(const Ensemble& ens, std::span<const double> p, std::span<const double> alphas,
                              const AuditOptions& opt) {
  for (double a : alphas) require((a > 0.0 && a < 1.0) || (a > 1.0 && a <= 2.0), "audit_carlen_lieb", a);
  if (p.empty()) throw RangeError("audit_carlen_lieb: empty alphabet");
  const std::vector<double> grid(alphas.begin(), alphas.end());
  const std::vector<double> weights(p.begin(), p.end());
  return run_samples("carlen_lieb", ens, kCarlenLieb, grid, opt, [&](Rng& rng, AuditReport& rep) {
    std::vector<PSDOp> w1, w2, mid;
    for (std::size_t x = 0; x < weights.size(); ++x) {
      w1.push_back(draw_psd(rng, ens));
      w2.push_back(draw_psd(rng, ens));
      mid.push_back(psd(0.5 * (w1.back().matrix() + w2.back().matrix())));
    }
    for (double alpha : grid) {
      const double at_mid = carlen_lieb_functional(weights, mid, alpha);
      const double averaged =
          0.5 * (carlen_lieb_functional(weights, w1, alpha) + carlen_lieb_functional(weights, w2, alpha));
      if (alpha < 1.0)
        rep.check(at_mid, averaged);
      else
        rep.check(averaged, at_mid);
    }
  });
}

CounterexampleValues counterexample_values(double alpha) {
  const DensityOp x = DensityOp::diagonal({1.0, 0.0});
  const DensityOp y = DensityOp::diagonal({0.0, 1.0});
  const std::vector<DensityOp> rhos{x, y}, sigmas{y, x};
  const std::vector<double> gamma{0.5, 0.5};
  const DensityOp rho_mix = mixture(gamma, rhos);
  const DensityOp sigma_mix = mixture(gamma, sigmas);
  return {d_renyi(rho_mix, sigma_mix, alpha, Family::New), d_renyi(x, y, alpha, Family::New),
          d_renyi(y, x, alpha, Family::New)};
}

bool counterexample_regression() {
  for (double alpha : {1.5, 2.0}) {
    const CounterexampleValues v = counterexample_values(alpha);
    if (!(v.mixture == ExtReal(0.0) && v.first.is_infinite() && v.second.is_infinite())) return false;
  }
  return counterexample_values(0.5).mixture == ExtReal(0.0);
}

ConcavitySearch search_joint_concavity_violation(std::uint64_t seed, int trials, double alpha, Index dim) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw RangeError("concavity search needs alpha in (0,1)");
  ConcavitySearch out;
  out.trials = trials;
  for (int t = 0; t < trials; ++t) {
    Rng rng = substream(seed, kConcavitySearch * 4096 + static_cast<std::uint64_t>(dim), static_cast<std::uint64_t>(t));
    std::uniform_int_distribution<Index> rank(1, dim);
    std::vector<DensityOp> ops;  // rho1, sigma1, rho2, sigma2
    for (int k = 0; k < 4; ++k) ops.push_back(random_density(rng, dim, rank(rng)));
    const PSDOp rho = psd(0.5 * (ops[0].matrix() + ops[2].matrix()));
    const PSDOp sigma = psd(0.5 * (ops[1].matrix() + ops[3].matrix()));
    const double slack = std::exp(log_q_new(rho, sigma, alpha)) -
                         0.5 * (std::exp(log_q_new(ops[0], ops[1], alpha)) + std::exp(log_q_new(ops[2], ops[3], alpha)));
    if (slack < out.worst_slack) {
      out.worst_slack = slack;
      out.witness = ops;
    }
  }
  return out;
}

std::vector<AuditReport> run_audit_suite(const AuditSuiteConfig& cfg) {
  auto pick = [&](const std::vector<double>& defaults, auto&& valid) {
    if (cfg.alpha_grid.empty()) return defaults;
    std::vector<double> g;
    for (double a : cfg.alpha_grid)
      if (valid(a)) g.push_back(a);
    return g;
  };
  auto positive_not_one = [](double a) { return is_one_of_finite_positive(a); };
  const std::vector<double> alt = pick(default_grids::alt, positive_not_one);
  const std::vector<double> rot = pick(default_grids::rotfeld, [](double a) { return std::isfinite(a) && a >= 0.0; });
  const std::vector<double> old_new = pick(default_grids::old_new, positive_not_one);
  const std::vector<double> comp = pick(default_grids::complements, positive_not_one);
  const std::vector<double> joint_new = pick(default_grids::joint_new, [](double a) {
    return (a >= 0.5 && a < 1.0) || (a > 1.0 && std::isfinite(a));
  });
  const std::vector<double> joint_old =
      pick(default_grids::joint_old, [](double a) { return (a > 0.0 && a < 1.0) || (a > 1.0 && a <= 2.0); });
  const std::vector<double> cl =
      pick(default_grids::carlen_lieb, [](double a) { return (a > 0.0 && a < 1.0) || (a > 1.0 && a <= 2.0); });
  const std::vector<double> letter_weights{0.5, 0.3, 0.2};

  const AuditOptions opt{cfg.tolerance, cfg.jobs};
  std::vector<AuditReport> out;
  for (Index dim : cfg.dims) {
    const Ensemble ens{dim, cfg.samples, cfg.seed, cfg.purity_bias};
    std::vector<AuditReport> reports{
        audit_alt(ens, alt, opt),
        audit_rotfeld(ens, rot, opt),
        audit_old_new_bounds(ens, old_new, opt),
        audit_continuity(ens, default_grids::continuity_c, default_grids::continuity_u, opt),
        audit_complements(ens, cfg.mixture_size, comp, opt),
        audit_joint_convexity(ens, joint_new, Family::New, opt),
        audit_joint_convexity(ens, joint_old, Family::Old, opt),
        audit_carlen_lieb(ens, letter_weights, cl, opt),
    };
    if (out.empty()) {
      out = std::move(reports);
    } else {
      for (std::size_t i = 0; i < out.size(); ++i) out[i] = merge(out[i], reports[i]);
    }
  }
  return out;
}

}  // namespace renyi
