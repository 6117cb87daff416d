#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "oracles.hpp"
#include "renyi/net.hpp"
#include "renyi/sampling.hpp"
#include "renyi/stein.hpp"

using namespace renyi;

namespace {

const DensityOp kRho = DensityOp::diagonal({0.75, 0.25});
const DensityOp kSigma = DensityOp::diagonal({0.5, 0.5});

/// Projection onto the positive eigenspace, by direct eigendecomposition.
oracle::Mat positive_projection(const oracle::Mat& x) {
  Eigen::SelfAdjointEigenSolver<oracle::Mat> es(x);
  oracle::Mat p = oracle::Mat::Zero(x.rows(), x.cols());
  for (int i = 0; i < x.rows(); ++i)
    if (es.eigenvalues()[i] > 1e-12) p += es.eigenvectors().col(i) * es.eigenvectors().col(i).adjoint();
  return p;
}

oracle::Mat kron_power(const oracle::Mat& a, int n) {
  oracle::Mat out = a;
  for (int k = 1; k < n; ++k) out = oracle::kron(out, a);
  return out;
}

/// sup over a dense grid of t in (0,1] of a t - log sum_i p_i^t q_i^(1-t).
double classical_phi(const std::vector<double>& p, const std::vector<double>& q, double a) {
  double best = -std::numeric_limits<double>::infinity();
  for (int k = 1; k <= 200000; ++k) {
    const double t = k / 200000.0;
    best = std::max(best, a * t - std::log(oracle::classical_q(p, q, t)));
  }
  return best;
}

HypothesisFamily random_family(Rng& rng, Index d, int m) {
  std::vector<DensityOp> n;
  for (int i = 0; i < m; ++i) n.push_back(random_full_rank_density(rng, d));
  return HypothesisFamily(n, random_full_rank_density(rng, d));
}

}  // namespace

TEST_CASE("hypothesis families validate their inputs") {
  CHECK_THROWS_AS(HypothesisFamily({}, kSigma), RangeError);
  CHECK_THROWS_AS(HypothesisFamily({DensityOp::maximally_mixed(3)}, kSigma), DimensionMismatch);
  CHECK_THROWS_AS(HypothesisFamily({kRho}, PSDOp::diagonal({1.0, 0.0})), SupportViolation);
  const HypothesisFamily f({kRho}, kSigma);
  CHECK(f.relative_entropy_distance() == doctest::Approx(0.130812).epsilon(1e-6));
}

TEST_CASE("Neyman-Pearson test on the diagonal pair") {
  const std::vector<DensityOp> n{kRho};
  const TestOp t = np_test(n, kSigma, 0.0, 1);
  CHECK((t.op().matrix() - Matrix(PSDOp::diagonal({1.0, 0.0}).matrix())).norm() <= 1e-14);
  const HypothesisFamily f(n, kSigma);
  const ErrorPair e = error_pair(t, f, 1);
  CHECK(e.type_I == doctest::Approx(0.25));
  CHECK(e.type_II == doctest::Approx(0.5));
  CHECK((np_test(n, kSigma, -50.0, 3).op().matrix() - Matrix::Identity(8, 8)).norm() <= 1e-12);
  CHECK(np_test(n, kSigma, 50.0, 3).op().matrix().norm() <= 1e-12);
  CHECK_THROWS_AS(np_test(n, kSigma, std::numeric_limits<double>::infinity(), 1), RangeError);
  CHECK_THROWS_AS(np_test(n, kSigma, 0.0, 0), RangeError);
  CHECK_THROWS_AS(np_test(n, kSigma, 0.0, 20, 1024), CapExceeded);
}

TEST_CASE("error pairs of the trivial tests") {
  const HypothesisFamily f({kRho}, PSDOp::diagonal({0.6, 0.9}));
  for (int n : {1, 2, 3}) {
    const Index d = 1 << n;
    const ErrorPair all = error_pair(TestOp(HermitianOp(Matrix::Identity(d, d))), f, n);
    CHECK(all.type_I == doctest::Approx(0.0).scale(1.0));
    CHECK(all.type_II == doctest::Approx(std::pow(1.5, n)));
    const ErrorPair none = error_pair(TestOp(HermitianOp::zero(d)), f, n);
    CHECK(none.type_I == doctest::Approx(1.0));
    CHECK(none.type_II == 0.0);
  }
  CHECK_THROWS_AS(error_pair(TestOp(HermitianOp::zero(2)), f, 2), DimensionMismatch);
  CHECK_THROWS_AS(TestOp(HermitianOp(2.0 * Matrix::Identity(2, 2))), InvalidOperator);
}

TEST_CASE("Neyman-Pearson projections against direct construction") {
  Rng rng = substream(21, 0, 0);
  for (int trial = 0; trial < 10; ++trial) {
    const HypothesisFamily f = random_family(rng, 2, 1 + trial % 3);
    for (int n : {1, 2, 4})
      for (double a : {-0.3, 0.05, 0.4}) {
        oracle::Mat bar = oracle::Mat::Zero(1 << n, 1 << n);
        for (const DensityOp& r : f.null_states()) bar += kron_power(r.matrix(), n);
        const oracle::Mat s = kron_power(f.sigma().matrix(), n);
        const oracle::Mat p = positive_projection(std::exp(-n * a) * bar - s);
        const TestOp t = np_test(f.null_states(), f.sigma(), a, n);
        CHECK((t.op().matrix() - p).norm() <= 1e-9);
        double worst = 0.0;
        for (const DensityOp& r : f.null_states())
          worst = std::max(worst, 1.0 - (kron_power(r.matrix(), n) * p).trace().real());
        const ErrorPair e = error_pair(t, f, n);
        CHECK(e.type_I == doctest::Approx(worst).epsilon(1e-9));
        CHECK(e.type_II == doctest::Approx((s * p).trace().real()).epsilon(1e-9));
      }
  }
}

TEST_CASE("type II error is nonincreasing in the threshold") {
  Rng rng = substream(22, 0, 0);
  const HypothesisFamily f = random_family(rng, 2, 2);
  for (int n : {2, 5}) {
    double last = std::numeric_limits<double>::infinity();
    for (double a = -1.0; a <= 1.5; a += 0.05) {
      const double b = error_pair(np_test(f.null_states(), f.sigma(), a, n), f, n).type_II;
      CHECK(b <= last + 1e-12);
      last = b;
    }
  }
}

TEST_CASE("exponent functions when the null state is sigma") {
  const HypothesisFamily f({kSigma}, kSigma);
  const ExponentFunctions ef(f);
  for (double t : {1e-3, 0.5, 1.0, 3.0}) CHECK(ef.psi(t) == doctest::Approx(0.0).scale(1.0));
  for (double a : {-1.0, -0.1, 0.2, 1.0}) {
    CHECK(ef.phi(a) == doctest::Approx(std::max(a, 0.0)).epsilon(1e-5).scale(1.0));
    CHECK(ef.phi_hat(a) == doctest::Approx(std::max(-a, 0.0)).epsilon(1e-5).scale(1.0));
  }
  const FiniteNBounds b = finite_n_bounds(ef, 0.3, 1, 1);
  CHECK(b.bound_type_II == doctest::Approx(std::exp(-ef.phi(0.3))));
}

TEST_CASE("exponent functions match a scalar Legendre transform in the commuting case") {
  const HypothesisFamily f({kRho}, kSigma);
  const ExponentFunctions ef(f);
  for (double a : {0.1, 0.0, 0.05, 0.12, 0.5})
    CHECK(ef.phi(a) == doctest::Approx(classical_phi({0.75, 0.25}, {0.5, 0.5}, a)).epsilon(1e-6).scale(1.0));
  // psi against the scalar sum and against direct matrix powers
  CHECK(ef.psi(0.4) == doctest::Approx(std::log(oracle::classical_q({0.75, 0.25}, {0.5, 0.5}, 0.4))));
  Rng rng = substream(23, 0, 0);
  const HypothesisFamily g = random_family(rng, 3, 2);
  const ExponentFunctions eg(g);
  for (double t : {0.2, 0.7}) {
    double best = -1e300;
    for (const DensityOp& r : g.null_states())
      best = std::max(best, std::log(oracle::q_new(r.matrix(), g.sigma().matrix(), t)));
    CHECK(eg.psi(t) == doctest::Approx(best).epsilon(1e-9));
  }
}

TEST_CASE("phi is convex, dominates a, and phi_hat is positive below D_1") {
  Rng rng = substream(24, 0, 0);
  for (int trial = 0; trial < 6; ++trial) {
    const HypothesisFamily f = random_family(rng, 2 + trial % 2, 1 + trial % 3);
    const ExponentFunctions ef(f);
    const double d1 = f.relative_entropy_distance();
    std::vector<double> vals;
    for (int k = 0; k <= 20; ++k) {
      const double a = -0.5 + 0.1 * k;
      vals.push_back(ef.phi(a));
      CHECK(vals.back() >= a - 1e-9);
    }
    for (std::size_t k = 1; k + 1 < vals.size(); ++k) CHECK(vals[k - 1] + vals[k + 1] - 2.0 * vals[k] >= -1e-7);
    for (double frac : {0.2, 0.5, 0.9}) CHECK(ef.phi_hat(frac * d1) > 0.0);
  }
}

TEST_CASE("finite-n bounds dominate the exact errors") {
  Rng rng = substream(25, 0, 0);
  for (int trial = 0; trial < 8; ++trial) {
    const HypothesisFamily f = random_family(rng, 2, 1 + trial % 3);
    const ExponentFunctions ef(f);
    const double d1 = f.relative_entropy_distance();
    for (double a : {0.5 * d1, 0.9 * d1, -0.1})
      for (int n = 1; n <= 5; ++n) {
        const ErrorPair e = error_pair(np_test(f.null_states(), f.sigma(), a, n), f, n);
        const FiniteNBounds b = finite_n_bounds(ef, a, n, f.size());
        CHECK(e.type_I <= b.bound_type_I + 1e-10);
        CHECK(e.type_II <= b.bound_type_II + 1e-10);
      }
  }
  const ExponentFunctions ef(HypothesisFamily({kRho}, kSigma));
  const FiniteNBounds with_net = finite_n_bounds(ef, 0.05, 3, 2, 0.01);
  const FiniteNBounds without = finite_n_bounds(ef, 0.05, 3, 2);
  CHECK(with_net.bound_type_I == doctest::Approx(without.bound_type_I + 0.03));
  CHECK(with_net.bound_type_II == without.bound_type_II);
}

TEST_CASE("greedy nets on a segment of qubit states") {
  std::vector<DensityOp> pool;
  for (int k = 0; k <= 100; ++k) {
    const double p = k / 100.0;
    pool.push_back(DensityOp::diagonal({p, 1.0 - p}));
  }
  const std::vector<DensityOp> net = build_net(pool, 0.5);
  for (std::size_t i = 0; i < net.size(); ++i)
    for (std::size_t j = i + 1; j < net.size(); ++j)
      CHECK(std::abs(net[i].matrix()(0, 0).real() - net[j].matrix()(0, 0).real()) * 2.0 >= 0.5 - 1e-12);
  CHECK(covering_radius(pool, net) < 0.5);
  CHECK(static_cast<double>(net.size()) <= net_size_bound(0.5, hermitian_real_dimension(2)));
  const std::vector<DensityOp> one{kRho};
  CHECK(build_net(one, 0.1).size() == 1);
  CHECK_THROWS_AS(build_net({}, 0.1), RangeError);
  CHECK_THROWS_AS(build_net(pool, 0.0), RangeError);
}

TEST_CASE("strong converse bound") {
  // D_t = 0 for every t, so the bound is -r (t_max - 1)/t_max
  const HypothesisFamily trivial({kSigma}, kSigma);
  CHECK(strong_converse_bound(trivial, 0.3).value == doctest::Approx(-0.3 * 49.0 / 50.0).epsilon(1e-9));
  // commuting pair against a dense scalar grid
  const HypothesisFamily f({kRho}, kSigma);
  const double r = f.relative_entropy_distance() + 0.1;
  double best = 1e300;
  for (int k = 1; k <= 400000; ++k) {
    const double t = 1.0 + 49.0 * k / 400000.0;
    const double d = std::log(oracle::classical_q({0.75, 0.25}, {0.5, 0.5}, t)) / (t - 1.0);
    best = std::min(best, (t - 1.0) / t * (d - r));
  }
  const ScalarMax sc = strong_converse_bound(f, r);
  CHECK(sc.value < 0.0);
  CHECK(sc.value == doctest::Approx(best).epsilon(1e-6).scale(1.0));
  CHECK(strong_converse_bound(f, f.relative_entropy_distance()).value <= 1e-12);
}

TEST_CASE("correlated bounds on i.i.d. sequences") {
  const DensityOp rho = kRho, sigma = kSigma;
  std::vector<CorrelatedStep> steps;
  for (int n = 1; n <= 4; ++n) steps.push_back({n, {tensor_power(rho, n)}, tensor_power(PSDOp(sigma), n)});
  const std::vector<double> ts = log_grid(0.01, 1.0, 40);
  const double a = 0.06;
  const std::vector<CorrelatedRow> rows = correlated_bounds(steps, a, ts);
  REQUIRE(rows.size() == 4);
  const double d1 = oracle::classical_renyi({0.75, 0.25}, {0.5, 0.5}, 1.0);
  for (const CorrelatedRow& row : rows) {
    for (std::size_t k = 0; k < ts.size(); ++k)
      CHECK(row.psi[k] == doctest::Approx(std::log(oracle::classical_q({0.75, 0.25}, {0.5, 0.5}, ts[k]))).epsilon(1e-10));
    CHECK(std::abs(row.left_derivative[0] - d1) <= 1e-3);
    CHECK(std::abs(row.left_derivative_richardson[0] - d1) <= 1e-6);
    CHECK(row.relative_entropy_rate[0] == doctest::Approx(d1).epsilon(1e-9));
    CHECK(row.errors.type_I <= row.bound_type_I + 1e-12);
    CHECK(row.errors.type_II <= row.bound_type_II + 1e-12);
    const std::vector<DensityOp> n1{rho};
    const ErrorPair iid = error_pair(np_test(n1, sigma, a, row.n), HypothesisFamily(n1, sigma), row.n);
    CHECK(row.errors.type_I == doctest::Approx(iid.type_I));
    CHECK(row.errors.type_II == doctest::Approx(iid.type_II));
  }
  std::vector<CorrelatedStep> bad{{1, {rho}, PSDOp(sigma)}, {2, {rho}, PSDOp(sigma)}};
  bad[1].rhos.push_back(rho);
  CHECK_THROWS_AS(correlated_bounds(bad, a, ts), DimensionMismatch);
  const std::vector<double> bad_ts{1.5};
  CHECK_THROWS_AS(correlated_bounds(steps, a, bad_ts), RangeError);
}

TEST_CASE("averaged mixtures") {
  const DensityOp r1 = DensityOp::diagonal({0.9, 0.1}), r2 = DensityOp::diagonal({0.2, 0.8});
  const std::vector<DensityOp> one{r1}, two{r1, r2};
  const std::vector<double> w1{1.0}, w2{0.25, 0.75};
  CHECK((averaged_mixture(one, w1, 3).matrix() - tensor_power(r1, 3).matrix()).norm() <= 1e-15);
  const PSDOp m = averaged_mixture(two, w2, 2);
  const std::vector<double> expect{0.25 * 0.81 + 0.75 * 0.04, 0.25 * 0.09 + 0.75 * 0.16, 0.25 * 0.09 + 0.75 * 0.16,
                                   0.25 * 0.01 + 0.75 * 0.64};
  for (int i = 0; i < 4; ++i) CHECK(m.matrix()(i, i).real() == doctest::Approx(expect[static_cast<std::size_t>(i)]));
  CHECK(m.trace() == doctest::Approx(1.0));
  const ExtReal rate = averaged_rate(two, w2, kSigma);
  CHECK(rate.value() == doctest::Approx(std::min(oracle::classical_renyi({0.9, 0.1}, {0.5, 0.5}, 1.0),
                                                 oracle::classical_renyi({0.2, 0.8}, {0.5, 0.5}, 1.0))));
  const std::vector<double> w3{0.0, 1.0};
  CHECK(averaged_rate(two, w3, kSigma).value() ==
        doctest::Approx(oracle::classical_renyi({0.2, 0.8}, {0.5, 0.5}, 1.0)));
  CHECK_THROWS_AS(averaged_mixture(two, w1, 2), DimensionMismatch);
}

TEST_CASE("sweeps are independent of the worker count") {
  const HypothesisFamily f({kRho, DensityOp::diagonal({0.6, 0.4})}, kSigma);
  const std::vector<double> as{0.0, 0.05};
  const std::vector<SteinRow> a = stein_sweep(f, as, 4, 1), b = stein_sweep(f, as, 4, 3);
  REQUIRE(a.size() == 8);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].n == b[i].n);
    CHECK(a[i].errors.type_II == b[i].errors.type_II);
    CHECK(a[i].errors.type_I <= a[i].bounds.bound_type_I + 1e-12);
    CHECK(a[i].phi_hat == doctest::Approx(a[i].phi - a[i].a));
  }
}
