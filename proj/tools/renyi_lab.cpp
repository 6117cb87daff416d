// renyi_lab: divergence tables, inequality audits and the coding sweeps.
//
// Exit status: 0 when every check passes, 1 on an inequality failure, 2 on
// bad input, 3 when a tensor power would exceed the dimension cap.

#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "renyi/channels.hpp"
#include "renyi/compress.hpp"
#include "renyi/divergences.hpp"
#include "renyi/errors.hpp"
#include "renyi/inequality_lab.hpp"
#include "renyi/io.hpp"
#include "renyi/stein.hpp"

using namespace renyi;

namespace {

enum Exit { kOk = 0, kCheckFailed = 1, kBadInput = 2, kOverCap = 3 };

struct Common {
  std::uint64_t seed = 1;
  double tolerance = kAuditTolerance;
  int jobs = 1;
  std::string out;
  std::string format = "csv";
};

void emit(const Common& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(c.out);
  if (!f) throw InputError(c.out + ": cannot write output file");
  f << text;
}

std::string cell(ExtReal x) { return x.is_infinite() ? "inf" : io::format_double(x.value()); }

/// Throws CapExceeded for the first n whose tensor power is too large.
void check_cap(Index dim, int n_max) {
  const std::size_t cap = default_dim_cap();
  std::size_t size = 1;
  for (int n = 1; n <= n_max; ++n) {
    if (size > cap / static_cast<std::size_t>(dim)) {
      std::cerr << "n = " << n << " is too large for dimension " << dim << "; lower --n-max\n";
      throw CapExceeded(cap + 1, cap);
    }
    size *= static_cast<std::size_t>(dim);
    if (size > cap) {
      std::cerr << "n = " << n << " is too large for dimension " << dim << "; lower --n-max\n";
      throw CapExceeded(size, cap);
    }
  }
}

bool violates(double larger, double smaller, double tol) {
  return larger - smaller < -tol * std::max({1.0, std::abs(larger), std::abs(smaller)});
}

int cmd_divergence(const Common& c, const std::string& rho_path, const std::string& sigma_path,
                   const std::vector<double>& alphas) {
  const PSDOp rho = io::load_psd(rho_path);
  const PSDOp sigma = io::load_psd(sigma_path);
  if (rho.dim() != sigma.dim()) throw InputError(sigma_path + ": dimension differs from " + rho_path);
  const SpectralPair pair(rho, sigma);
  std::ostringstream out;
  out << "alpha,D_old,D_new,lower_bound,satisfied\n";
  bool ok = true;
  for (double a : alphas) {
    if (!(a > 0.0) || !std::isfinite(a)) throw InputError("--alpha-grid: alpha must be positive and finite");
    const ExtReal d_old = d_renyi(pair, a, Family::Old);
    const ExtReal d_new = d_renyi(pair, a, Family::New);
    const ExtReal lower = a == 1.0 ? d_old : old_new_lower_bound(pair, rho, a, converse_sigma_constant(pair, a));
    bool row_ok = true;
    if (d_new.is_finite() && lower.is_infinite()) row_ok = false;
    if (d_new.is_finite() && lower.is_finite() && violates(d_new.value(), lower.value(), c.tolerance)) row_ok = false;
    if (d_old.is_finite() && d_new.is_infinite()) row_ok = false;
    if (d_old.is_finite() && d_new.is_finite() && violates(d_old.value(), d_new.value(), c.tolerance)) row_ok = false;
    ok = ok && row_ok;
    out << io::format_double(a) << ',' << cell(d_old) << ',' << cell(d_new) << ',' << cell(lower) << ','
        << (row_ok ? "true" : "false") << '\n';
  }
  emit(c, out.str());
  return ok ? kOk : kCheckFailed;
}

int cmd_audit(const Common& c, AuditSuiteConfig cfg) {
  cfg.seed = c.seed;
  cfg.tolerance = c.tolerance;
  cfg.jobs = c.jobs;
  const std::vector<AuditReport> reports = run_audit_suite(cfg);
  if (c.format == "json")
    emit(c, io::audit_json(reports).dump(2) + "\n");
  else
    emit(c, io::audit_csv(reports));
  for (const AuditReport& r : reports)
    if (!r.passed()) return kCheckFailed;
  return kOk;
}

int cmd_stein(const Common& c, const std::string& path, std::vector<double> as, int n_max) {
  const io::HypothesisInstance inst = io::load_hypothesis(path);
  if (!inst.sigma) throw InputError(path + ":$: missing field \"sigma\"");
  const HypothesisFamily family(inst.null_states, *inst.sigma);
  check_cap(family.dim(), n_max);
  if (as.empty()) {
    const double d1 = family.relative_entropy_distance();
    as = {0.25 * d1, 0.5 * d1, 0.75 * d1, 0.9 * d1};
  }
  const std::vector<SteinRow> rows = stein_sweep(family, as, n_max, c.jobs);
  const bool averaged = !inst.weights.empty();
  ExtReal rate;
  if (averaged) rate = averaged_rate(inst.null_states, inst.weights, *inst.sigma);
  std::ostringstream out;
  out << "n,a,type_I,type_II,bound_typeI,bound_typeII,phi,phi_hat";
  if (averaged) out << ",type_I_averaged,averaged_rate";
  out << '\n';
  bool ok = true;
  for (const SteinRow& r : rows) {
    ok = ok && r.errors.type_I <= r.bounds.bound_type_I + 1e-10 && r.errors.type_II <= r.bounds.bound_type_II + 1e-10;
    out << r.n << ',' << io::format_double(r.a) << ',' << io::format_double(r.errors.type_I) << ','
        << io::format_double(r.errors.type_II) << ',' << io::format_double(r.bounds.bound_type_I) << ','
        << io::format_double(r.bounds.bound_type_II) << ',' << io::format_double(r.phi) << ','
        << io::format_double(r.phi_hat);
    if (averaged) {
      const PSDOp mix = averaged_mixture(inst.null_states, inst.weights, r.n);
      const TestOp t = np_test(inst.null_states, *inst.sigma, r.a, r.n);
      const double kept = mix.matrix().cwiseProduct(t.op().matrix().transpose()).sum().real();
      out << ',' << io::format_double(mix.trace() - kept) << ',' << cell(rate);
    }
    out << '\n';
  }
  emit(c, out.str());
  return ok ? kOk : kCheckFailed;
}

int cmd_compress(const Common& c, const std::string& path, std::vector<double> as, int n_max) {
  const io::HypothesisInstance inst = io::load_hypothesis(path);
  check_cap(inst.null_states[0].dim(), n_max);
  if (as.empty()) {
    double h = 0.0;
    for (const DensityOp& rho : inst.null_states) h = std::max(h, umegaki(rho, PSDOp::identity(rho.dim())).value() * -1.0);
    as = {-(h + 0.2), -(h + 0.1), -h, -(h - 0.1)};
  }
  const std::vector<CompressRow> rows = compress_sweep(inst.null_states, as, n_max, c.jobs);
  std::ostringstream out;
  out << "n,a,rate,F_e_worst,F_worst\n";
  for (const CompressRow& r : rows)
    out << r.n << ',' << io::format_double(r.a) << ',' << io::format_double(r.rate) << ','
        << io::format_double(r.F_e_worst) << ',' << io::format_double(r.F_worst) << '\n';
  emit(c, out.str());
  return kOk;
}

int cmd_channel(const Common& c, const std::string& path, const std::vector<double>& alphas, long long messages) {
  const io::ChannelInstance inst = io::load_channel(path);
  for (double a : alphas)
    if (!(a > 0.0) || !std::isfinite(a)) throw InputError("--alpha-grid: alpha must be positive and finite");
  ChiNewOptions opt;
  opt.seed = c.seed;
  const std::vector<ChannelRow> rows = channel_sweep(inst.channel, inst.input, alphas, messages, c.jobs, opt);
  std::ostringstream out;
  out << "alpha,chi_old,chi_new,gap,chi_lower,hn_bound\n";
  bool ok = true;
  for (const ChannelRow& r : rows) {
    ok = ok && r.gap >= -1e-6 && r.chi_new >= r.chi_lower - 1e-6;
    out << io::format_double(r.alpha) << ',' << io::format_double(r.chi_old) << ',' << io::format_double(r.chi_new)
        << ',' << io::format_double(r.gap) << ',' << io::format_double(r.chi_lower) << ','
        << io::format_double(r.hn_bound) << '\n';
  }
  emit(c, out.str());
  return ok ? kOk : kCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Renyi divergence lab: divergences, inequality audits, Stein, compression and channel sweeps"};
  app.require_subcommand(1);
  Common common;
  app.add_option("--seed", common.seed, "Random seed")->capture_default_str();
  app.add_option("--tolerance", common.tolerance, "Relative tolerance of inequality checks")->capture_default_str();
  app.add_option("--jobs", common.jobs, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--out", common.out, "Output file (default: stdout)");
  app.add_option("--format", common.format, "Report format for audit")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();

  std::vector<double> alpha_grid;
  std::vector<double> a_grid;
  int n_max = 6;

  auto* div = app.add_subcommand("divergence", "Both Renyi families and the old-new lower bound over an alpha grid");
  std::string rho_path, sigma_path;
  div->add_option("rho", rho_path, "Operator JSON for rho")->required();
  div->add_option("sigma", sigma_path, "Operator JSON for sigma")->required();
  div->add_option("--alpha-grid", alpha_grid, "Alpha values")->delimiter(',');
  div->fallthrough();

  auto* audit = app.add_subcommand("audit", "Randomized audit of every trace inequality");
  AuditSuiteConfig cfg;
  audit->add_option("--dims", cfg.dims, "Dimensions")->delimiter(',')->capture_default_str();
  audit->add_option("--samples", cfg.samples, "Samples per dimension")->check(CLI::PositiveNumber)->capture_default_str();
  audit->add_option("--purity-bias", cfg.purity_bias, "Probability of a rank-deficient sample")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  audit->add_option("--mixture-size", cfg.mixture_size, "Components in mixture audits")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  audit->add_option("--alpha-grid", alpha_grid, "Override every audit's alpha grid")->delimiter(',');
  audit->fallthrough();

  auto* stein = app.add_subcommand("stein", "Neyman-Pearson errors against the finite-n bounds");
  std::string stein_path;
  stein->add_option("instance", stein_path, "Hypothesis JSON")->required();
  stein->add_option("--a-grid", a_grid, "Thresholds (default: fractions of D_1)")->delimiter(',');
  stein->add_option("--n-max", n_max, "Largest block length")->check(CLI::PositiveNumber)->capture_default_str();
  stein->fallthrough();

  auto* compress = app.add_subcommand("compress", "Rates and fidelities of the projection compression scheme");
  std::string compress_path;
  compress->add_option("instance", compress_path, "Hypothesis JSON (sigma ignored)")->required();
  compress->add_option("--a-grid", a_grid, "Thresholds, minus the target rate (default around the entropy)")
      ->delimiter(',');
  compress->add_option("--n-max", n_max, "Largest block length")->check(CLI::PositiveNumber)->capture_default_str();
  compress->fallthrough();

  auto* channel = app.add_subcommand("channel", "alpha-Holevo quantities of both families and the HN bound");
  std::string channel_path;
  long long messages = 2;
  channel->add_option("instance", channel_path, "Channel JSON")->required();
  channel->add_option("--alpha-grid", alpha_grid, "Alpha values")->delimiter(',');
  channel->add_option("--messages", messages, "Code size for the HN bound")->check(CLI::PositiveNumber)->capture_default_str();
  channel->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kBadInput;
  }

  try {
    if (*div) {
      if (alpha_grid.empty()) alpha_grid = {0.1, 0.25, 0.5, 0.75, 0.9, 1.0, 1.1, 1.5, 2.0, 3.0, 5.0};
      return cmd_divergence(common, rho_path, sigma_path, alpha_grid);
    }
    if (*audit) {
      cfg.alpha_grid = alpha_grid;
      return cmd_audit(common, cfg);
    }
    if (*stein) return cmd_stein(common, stein_path, a_grid, n_max);
    if (*compress) return cmd_compress(common, compress_path, a_grid, n_max);
    if (alpha_grid.empty()) alpha_grid = {0.5, 0.8, 1.5, 2.0};
    return cmd_channel(common, channel_path, alpha_grid, messages);
  } catch (const CapExceeded& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kOverCap;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kBadInput;
  } catch (const InvalidOperator& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kBadInput;
  } catch (const DimensionMismatch& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kBadInput;
  } catch (const SupportViolation& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kBadInput;
  } catch (const RangeError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kBadInput;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBadInput;
  }
}
