#include "renyi/stein.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "renyi/errors.hpp"
#include "renyi/net.hpp"
#include "renyi/parallel.hpp"

namespace renyi {

namespace {

constexpr double kTestTolerance = 1e-10;

double trace_product(const Matrix& a, const Matrix& b) { return a.cwiseProduct(b.transpose()).sum().real(); }

void require_n(int n) {
  if (n < 1) throw RangeError("n must be a positive integer, got " + std::to_string(n));
}

/// {e^(-na) rho_bar - sigma_n > 0} without overflowing e^(-na).
HermitianOp np_projection(const Matrix& rho_bar, const Matrix& sigma_n, double a, int n) {
  if (!std::isfinite(a)) throw RangeError("the test threshold a must be finite");
  const double x = -static_cast<double>(n) * a;
  const Matrix diff = x <= 0.0 ? Matrix(std::exp(x) * rho_bar - sigma_n) : Matrix(rho_bar - std::exp(-x) * sigma_n);
  return positive_part_projection(HermitianOp(diff, unchecked));
}

ErrorPair errors_of(const Matrix& t, std::span<const Matrix> rhos, const Matrix& sigma) {
  double worst = 0.0;
  for (const Matrix& r : rhos) worst = std::max(worst, r.trace().real() - trace_product(r, t));
  return {worst, trace_product(sigma, t)};
}

}  // namespace

HypothesisFamily::HypothesisFamily(std::vector<DensityOp> null_states, PSDOp sigma)
    : null_(std::move(null_states)), sigma_(std::move(sigma)) {
  if (null_.empty()) throw RangeError("the null hypothesis needs at least one state");
  for (std::size_t i = 0; i < null_.size(); ++i) {
    if (null_[i].dim() != sigma_.dim())
      throw DimensionMismatch("null state " + std::to_string(i) + " has dimension " +
                              std::to_string(null_[i].dim()) + ", sigma has " + std::to_string(sigma_.dim()));
    if (!support_included(null_[i], sigma_))
      throw SupportViolation("null state " + std::to_string(i) + " is not supported inside sigma");
  }
}

double HypothesisFamily::relative_entropy_distance() const {
  double best = std::numeric_limits<double>::infinity();
  for (const DensityOp& rho : null_) best = std::min(best, umegaki(rho, sigma_).value());
  return best;
}

TestOp::TestOp(HermitianOp t) : t_(std::move(t)) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(t_.matrix(), Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -kTestTolerance || es.eigenvalues().maxCoeff() > 1.0 + kTestTolerance)
    throw InvalidOperator("a test must satisfy 0 <= T <= I");
}

TestOp np_test(std::span<const DensityOp> rhos, const PSDOp& sigma, double a, int n, std::size_t cap) {
  require_n(n);
  if (rhos.empty()) throw RangeError("np_test needs at least one null state");
  const Matrix sigma_n = tensor_power(sigma, n, cap).matrix();
  Matrix rho_bar = Matrix::Zero(sigma_n.rows(), sigma_n.cols());
  for (const DensityOp& rho : rhos) {
    if (rho.dim() != sigma.dim()) throw DimensionMismatch("null state and sigma dimensions differ");
    rho_bar += tensor_power(rho, n, cap).matrix();
  }
  return TestOp(np_projection(rho_bar, sigma_n, a, n));
}

ErrorPair error_pair(const TestOp& test, const HypothesisFamily& family, int n, std::size_t cap) {
  require_n(n);
  const Matrix sigma_n = tensor_power(family.sigma(), n, cap).matrix();
  if (test.dim() != sigma_n.rows())
    throw DimensionMismatch("test dimension " + std::to_string(test.dim()) + " does not match " +
                            std::to_string(sigma_n.rows()));
  std::vector<Matrix> rhos;
  for (const DensityOp& rho : family.null_states()) rhos.push_back(tensor_power(rho, n, cap).matrix());
  return errors_of(test.op().matrix(), rhos, sigma_n);
}

ExponentFunctions::ExponentFunctions(const HypothesisFamily& family)
    : grid_(log_grid(kLegendreTMin, 1.0, kLegendreGrid)) {
  for (const DensityOp& rho : family.null_states()) pairs_.emplace_back(rho, family.sigma());
}

double ExponentFunctions::psi(double t) const {
  if (!(t > 0.0)) throw RangeError("psi is defined for t > 0");
  double best = -std::numeric_limits<double>::infinity();
  for (const SpectralPair& p : pairs_) best = std::max(best, p.log_q_new(t));
  return best;
}

ScalarMax ExponentFunctions::phi_argmax(double a) const {
  return grid_then_golden_maximize([&](double t) { return a * t - psi(t); }, grid_, kLegendreTol);
}

FiniteNBounds finite_n_bounds(const ExponentFunctions& ef, double a, int n, std::size_t net_size, double net_radius) {
  require_n(n);
  if (net_radius < 0.0) throw RangeError("net radius must be non-negative");
  const double size = static_cast<double>(net_size);
  const double phi = ef.phi(a);
  return {size * std::exp(-n * (phi - a)) + n * net_radius, size * std::exp(-n * phi)};
}

std::vector<DensityOp> build_net(const std::vector<DensityOp>& pool, double delta) {
  const auto dist = [](const DensityOp& x, const DensityOp& y) {
    return trace_norm(HermitianOp(x.matrix() - y.matrix(), unchecked));
  };
  std::vector<DensityOp> net;
  for (std::size_t i : greedy_net(pool, delta, dist)) net.push_back(pool[i]);
  return net;
}

double covering_radius(const std::vector<DensityOp>& pool, const std::vector<DensityOp>& net) {
  if (net.empty()) throw RangeError("covering_radius: empty net");
  double worst = 0.0;
  for (const DensityOp& x : pool) {
    double best = std::numeric_limits<double>::infinity();
    for (const DensityOp& y : net) best = std::min(best, trace_norm(HermitianOp(x.matrix() - y.matrix(), unchecked)));
    worst = std::max(worst, best);
  }
  return worst;
}

ScalarMax strong_converse_bound(const HypothesisFamily& family, double r, double t_max) {
  if (!(t_max > 1.0)) throw RangeError("strong_converse_bound: t_max must exceed 1");
  std::vector<SpectralPair> pairs;
  for (const DensityOp& rho : family.null_states()) pairs.emplace_back(rho, family.sigma());
  auto objective = [&](double t) {
    double d = std::numeric_limits<double>::infinity();
    for (const SpectralPair& p : pairs) d = std::min(d, d_renyi(p, t, Family::New).value());
    return (t - 1.0) / t * (d - r);
  };
  std::vector<double> grid = log_grid(1e-6, t_max - 1.0, 512);
  for (double& g : grid) g += 1.0;
  const ScalarMax m = grid_then_golden_maximize([&](double t) { return -objective(t); }, grid, 1e-9);
  return {m.arg, -m.value};
}

std::vector<CorrelatedRow> correlated_bounds(std::span<const CorrelatedStep> steps, double a,
                                             std::span<const double> t_grid, double h) {
  for (double t : t_grid)
    if (!(t > 0.0 && t <= 1.0)) throw RangeError("correlated_bounds: t grid must lie in (0,1]");
  if (t_grid.empty()) throw RangeError("correlated_bounds: empty t grid");
  if (!(h > 0.0 && h < 1.0)) throw RangeError("correlated_bounds: step h must lie in (0,1)");
  std::size_t r = 0;
  std::vector<CorrelatedRow> rows;
  for (const CorrelatedStep& step : steps) {
    require_n(step.n);
    if (step.rhos.empty()) throw RangeError("correlated_bounds: empty null family");
    if (r == 0) r = step.rhos.size();
    if (step.rhos.size() != r) throw DimensionMismatch("correlated_bounds: the number of null states changes with n");
    std::vector<SpectralPair> pairs;
    std::vector<Matrix> rho_mats;
    Matrix rho_bar = Matrix::Zero(step.sigma.dim(), step.sigma.dim());
    for (const DensityOp& rho : step.rhos) {
      if (rho.dim() != step.sigma.dim())
        throw DimensionMismatch("correlated_bounds: state dimension differs from sigma at n = " + std::to_string(step.n));
      pairs.emplace_back(rho, step.sigma);
      if (!pairs.back().support_included())
        throw SupportViolation("correlated_bounds: support condition fails at n = " + std::to_string(step.n));
      rho_mats.push_back(rho.matrix());
      rho_bar += rho.matrix();
    }
    CorrelatedRow row;
    row.n = step.n;
    const double n = step.n;
    const HermitianOp test = np_projection(rho_bar, step.sigma.matrix(), a, step.n);
    row.errors = errors_of(test.matrix(), rho_mats, step.sigma.matrix());
    double best_I = -std::numeric_limits<double>::infinity(), best_II = best_I;
    for (double t : t_grid) {
      double psi = -std::numeric_limits<double>::infinity();
      for (const SpectralPair& p : pairs) psi = std::max(psi, p.log_q_new(t) / n);
      row.psi.push_back(psi);
      best_I = std::max(best_I, a * (t - 1.0) - psi);
      best_II = std::max(best_II, a * t - psi);
    }
    const double count = static_cast<double>(r);
    row.bound_type_I = count * std::exp(-n * best_I);
    row.bound_type_II = count * std::exp(-n * best_II);
    for (const SpectralPair& p : pairs) {
      const double at_one = p.log_q_old(1.0) / n;
      const double coarse = (at_one - p.log_q_old(1.0 - h) / n) / h;
      const double fine = (at_one - p.log_q_old(1.0 - 0.5 * h) / n) / (0.5 * h);
      row.left_derivative.push_back(coarse);
      row.left_derivative_richardson.push_back(2.0 * fine - coarse);
      row.relative_entropy_rate.push_back(p.relative_entropy() / n);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

PSDOp averaged_mixture(std::span<const DensityOp> rhos, std::span<const double> gammas, int n, std::size_t cap) {
  require_n(n);
  if (rhos.empty() || rhos.size() != gammas.size())
    throw DimensionMismatch("averaged_mixture: need one weight per state");
  double total = 0.0;
  for (double g : gammas) {
    if (!(g >= 0.0)) throw RangeError("averaged_mixture: weights must be non-negative");
    total += g;
  }
  if (!(total > 0.0)) throw RangeError("averaged_mixture: weights sum to zero");
  Matrix out;
  for (std::size_t i = 0; i < rhos.size(); ++i) {
    if (rhos[i].dim() != rhos[0].dim()) throw DimensionMismatch("averaged_mixture: states of different dimension");
    const Matrix term = gammas[i] * tensor_power(rhos[i], n, cap).matrix();
    out = i == 0 ? term : Matrix(out + term);
  }
  return PSDOp(std::move(out), unchecked);
}

ExtReal averaged_rate(std::span<const DensityOp> rhos, std::span<const double> gammas, const PSDOp& sigma) {
  if (rhos.empty() || rhos.size() != gammas.size()) throw DimensionMismatch("averaged_rate: need one weight per state");
  ExtReal best = ExtReal::infinity();
  bool any = false;
  for (std::size_t i = 0; i < rhos.size(); ++i) {
    if (!(gammas[i] > 0.0)) continue;
    any = true;
    best = std::min(best, umegaki(rhos[i], sigma));
  }
  if (!any) throw RangeError("averaged_rate: no component has positive weight");
  return best;
}

std::vector<SteinRow> stein_sweep(const HypothesisFamily& family, std::span<const double> a_grid, int n_max, int jobs,
                                  std::size_t cap) {
  require_n(n_max);
  const ExponentFunctions ef(family);
  std::vector<double> phis;
  for (double a : a_grid) phis.push_back(ef.phi(a));
  const std::size_t na = a_grid.size();
  return parallel_map(static_cast<std::size_t>(n_max) * na, jobs, [&](std::size_t k) {
    const int n = static_cast<int>(k / na) + 1;
    const std::size_t j = k % na;
    const double a = a_grid[j];
    const TestOp test = np_test(family.null_states(), family.sigma(), a, n, cap);
    const double size = static_cast<double>(family.size());
    const FiniteNBounds bounds{size * std::exp(-n * (phis[j] - a)), size * std::exp(-n * phis[j])};
    return SteinRow{n, a, error_pair(test, family, n, cap), bounds, phis[j], phis[j] - a};
  });
}

}  // namespace renyi
