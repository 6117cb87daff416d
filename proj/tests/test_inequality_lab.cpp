#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "oracles.hpp"
#include "renyi/inequality_lab.hpp"

using namespace renyi;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

const std::vector<double> kHalf{0.5};

}  // namespace

TEST_CASE("check records slack with the scale-aware tolerance") {
  AuditReport r;
  r.tolerance = 1e-9;
  r.check(1.0, 1.0);
  CHECK(r.worst_slack == 0.0);
  r.check(1e6, 1e6 + 1e-4);  // within 1e-9 relative
  CHECK(r.failures == 0);
  CHECK(r.worst_slack == doctest::Approx(-1e-4));
  r.check(0.0, 1e-8);
  CHECK(r.failures == 1);
  r.check(ExtReal::infinity(), ExtReal(3.0));
  r.check(ExtReal::infinity(), ExtReal::infinity());
  CHECK(r.failures == 1);
  r.check(ExtReal(3.0), ExtReal::infinity());
  CHECK(r.failures == 2);
  CHECK(r.worst_slack == -kInf);
  CHECK(r.checks == 6);
}

TEST_CASE("merging sums counts and keeps the worst slack") {
  AuditReport a, b;
  a.id = b.id = "x";
  a.samples = 3;
  b.samples = 4;
  a.checks = 10;
  b.checks = 1;
  a.worst_slack = 0.5;
  b.worst_slack = -0.25;
  b.failures = 1;
  a.dims = {2};
  b.dims = {3};
  const AuditReport m = merge(a, b);
  CHECK(m.samples == 7);
  CHECK(m.checks == 11);
  CHECK(m.failures == 1);
  CHECK(m.worst_slack == -0.25);
  CHECK(m.dims == std::vector<Index>{2, 3});
  b.id = "y";
  CHECK_THROWS_AS(merge(a, b), RangeError);
}

TEST_CASE("audits are deterministic under a fixed seed") {
  const Ensemble ens{3, 40, 9, 0.3};
  const std::vector<double> grid{0.5, 2.0};
  const AuditReport a = audit_alt(ens, grid), b = audit_alt(ens, grid, {kAuditTolerance, 3});
  CHECK(a.worst_slack == b.worst_slack);
  CHECK(a.checks == b.checks);
  const AuditReport c = audit_alt(Ensemble{3, 40, 10, 0.3}, grid);
  CHECK(a.worst_slack != c.worst_slack);
}

TEST_CASE("ALT and its converse on random qubit pairs") {
  const AuditReport r = audit_alt(Ensemble{2, 500, 1, 0.2}, kHalf);
  CHECK(r.failures == 0);
  CHECK(r.checks == 1000);
  CHECK_THROWS_AS(audit_alt(Ensemble{2, 1, 1, 0.2}, std::vector<double>{1.0}), RangeError);
  CHECK_THROWS_AS(audit_alt(Ensemble{2, 1, 1, 0.2}, std::vector<double>{0.0}), RangeError);
}

TEST_CASE("ALT sides against direct matrix powers") {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 30; ++t) {
    const oracle::Mat a = oracle::random_state(rng, 3), b = 2.0 * oracle::random_state(rng, 3);
    for (double alpha : {0.3, 0.8, 1.6, 2.5}) {
      const oracle::Mat aa = oracle::mpow(a, alpha);
      const double inner = (aa * oracle::mpow(b, alpha) * aa).trace().real();
      const double outer = oracle::trace_fn(a * b * a, alpha);
      if (alpha < 1.0)
        CHECK(inner <= outer + 1e-12);
      else
        CHECK(inner >= outer - 1e-12);
    }
  }
}

TEST_CASE("Rotfeld and the power bound") {
  const std::vector<double> grid{0.0, 0.5, 1.0, 1.7, 3.0};
  for (Index d : {2, 3}) {
    const AuditReport r = audit_rotfeld(Ensemble{d, 200, 2, 0.5}, grid);
    CHECK(r.failures == 0);
    // alpha = 1 is an equality
    CHECK(r.worst_slack <= 1e-12);
  }
  // orthogonal supports give equality
  const PSDOp a = PSDOp::diagonal({2.0, 0.0}), b = PSDOp::diagonal({0.0, 3.0});
  for (double alpha : {0.0, 0.5, 2.0})
    CHECK(trace_power(a + b, alpha) == doctest::Approx(trace_power(a, alpha) + trace_power(b, alpha)));
}

TEST_CASE("old-new bounds with the converse constant") {
  for (Index d : {2, 3, 4}) {
    const AuditReport r = audit_old_new_bounds(Ensemble{d, 200, 3, 0.2}, default_grids::old_new);
    CHECK(r.failures == 0);
    CHECK(r.worst_slack >= -1e-8);
  }
}

TEST_CASE("the largest-eigenvalue form fails above one on a commuting pair") {
  const DensityOp rho = DensityOp::diagonal({0.5, 0.5});
  const DensityOp sigma = DensityOp::diagonal({0.999, 0.001});
  const SpectralPair pair(rho, sigma);
  for (double alpha : {1.5, 3.0}) {
    const double d_new = d_renyi(pair, alpha, Family::New).value();
    const double norm_form = old_new_lower_bound(pair, rho, alpha, pair.sigma_norm()).value();
    const double fixed = old_new_lower_bound(pair, rho, alpha, converse_sigma_constant(pair, alpha)).value();
    CHECK(norm_form > d_new + 0.1);
    CHECK(fixed <= d_new + 1e-12);
    // scalar oracle: both families equal the classical value
    const double classical = std::log(oracle::classical_q({0.5, 0.5}, {0.999, 0.001}, alpha)) / (alpha - 1.0);
    CHECK(d_new == doctest::Approx(classical).epsilon(1e-10));
    CHECK(norm_form == doctest::Approx(alpha * classical + std::log(1.0) - std::log(2.0 * std::pow(0.5, alpha)) +
                                       (alpha - 1.0) * std::log(0.999))
                           .epsilon(1e-10));
  }
  CHECK(converse_sigma_constant(pair, 0.5) == doctest::Approx(0.999));
  CHECK(converse_sigma_constant(pair, 2.0) == doctest::Approx(0.001));
}

TEST_CASE("continuity envelopes bracket the divergences") {
  const std::vector<double> cs{1.0}, us{0.25, 0.75};
  for (Index d : {2, 4}) CHECK(audit_continuity(Ensemble{d, 100, 4, 0.2}, cs, us).failures == 0);
  CHECK_THROWS_AS(audit_continuity(Ensemble{2, 1, 1, 0.2}, std::vector<double>{0.0}, us), RangeError);
  CHECK_THROWS_AS(audit_continuity(Ensemble{2, 1, 1, 0.2}, cs, std::vector<double>{1.0}), RangeError);
}

TEST_CASE("complements on random triples") {
  for (Index d : {2, 3, 4}) {
    const AuditReport r = audit_complements(Ensemble{d, 200, 5, 0.3}, 3, default_grids::complements);
    CHECK(r.failures == 0);
  }
  // a single component turns the new-family inequalities into equalities
  const AuditReport one = audit_complements(Ensemble{2, 50, 5, 0.3}, 1, default_grids::complements);
  CHECK(one.failures == 0);
  CHECK(std::abs(one.worst_slack) <= 1e-10);
}

TEST_CASE("mixture bound of the new divergence collapses for identical states") {
  std::mt19937_64 rng(8);
  const oracle::Mat r = oracle::random_state(rng, 3), s = oracle::random_state(rng, 3);
  const DensityOp rho(r), sigma(s);
  // sum_i g_i rho = rho, so the lower bound sits exactly log min g below the value
  for (double alpha : {0.4, 2.5}) {
    const double d = d_renyi(rho, sigma, alpha, Family::New).value();
    const double oracle_d = std::log(oracle::q_new(r, s, alpha)) / (alpha - 1.0);
    CHECK(d == doctest::Approx(oracle_d).epsilon(1e-9));
    CHECK(d - (d + std::log(0.2)) == doctest::Approx(-std::log(0.2)));
  }
}

TEST_CASE("joint concavity and convexity ranges") {
  const Ensemble ens{2, 300, 6, 0.2};
  CHECK(audit_joint_convexity(ens, std::vector<double>{0.75}, Family::New).failures == 0);
  CHECK(audit_joint_convexity(ens, default_grids::joint_new, Family::New).failures == 0);
  CHECK(audit_joint_convexity(Ensemble{3, 300, 6, 0.2}, default_grids::joint_old, Family::Old).failures == 0);
  CHECK_THROWS_AS(audit_joint_convexity(ens, std::vector<double>{0.3}, Family::New), RangeError);
  CHECK_THROWS_AS(audit_joint_convexity(ens, std::vector<double>{2.5}, Family::Old), RangeError);
  CHECK_THROWS_AS(audit_joint_convexity(ens, std::vector<double>{1.0}, Family::Old), RangeError);
}

TEST_CASE("joint convexity in the commuting case matches scalar sums") {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 50; ++t) {
    const auto p1 = oracle::random_probs(rng, 3), q1 = oracle::random_probs(rng, 3);
    const auto p2 = oracle::random_probs(rng, 3), q2 = oracle::random_probs(rng, 3);
    std::vector<double> pm(3), qm(3);
    for (int i = 0; i < 3; ++i) {
      pm[i] = 0.5 * (p1[i] + p2[i]);
      qm[i] = 0.5 * (q1[i] + q2[i]);
    }
    for (double a : {0.3, 0.75, 1.5, 3.0}) {
      const double mixed = oracle::classical_q(pm, qm, a);
      const double avg = 0.5 * (oracle::classical_q(p1, q1, a) + oracle::classical_q(p2, q2, a));
      const double lib = q_new(DensityOp::diagonal(pm), DensityOp::diagonal(qm), a);
      CHECK(lib == doctest::Approx(mixed).epsilon(1e-10));
      if (a < 1.0)
        CHECK(mixed >= avg - 1e-12);
      else
        CHECK(mixed <= avg + 1e-12);
    }
  }
}

TEST_CASE("Carlen-Lieb functional") {
  std::mt19937_64 rng(13);
  const oracle::Mat w = 1.7 * oracle::random_state(rng, 3);
  const std::vector<PSDOp> one{PSDOp(w)};
  const std::vector<double> unit{1.0};
  for (double a : {0.4, 1.5})
    CHECK(carlen_lieb_functional(unit, one, a) == doctest::Approx(std::pow(1.7, a)).epsilon(1e-10));
  // two letters against direct matrix functions
  const oracle::Mat v = oracle::random_state(rng, 3);
  const std::vector<PSDOp> two{PSDOp(w), PSDOp(v)};
  const std::vector<double> p{0.3, 0.7};
  for (double a : {0.4, 1.5}) {
    const oracle::Mat sum = 0.3 * oracle::mpow(w, a) + 0.7 * oracle::mpow(v, a);
    CHECK(carlen_lieb_functional(p, two, a) == doctest::Approx(std::pow(oracle::trace_fn(sum, 1.0 / a), a)).epsilon(1e-10));
  }
  CHECK(audit_carlen_lieb(Ensemble{2, 300, 7, 0.2}, p, std::vector<double>{1.5}).failures == 0);
  CHECK(audit_carlen_lieb(Ensemble{3, 200, 7, 0.2}, p, default_grids::carlen_lieb).failures == 0);
  CHECK_THROWS_AS(audit_carlen_lieb(Ensemble{2, 1, 7, 0.2}, p, std::vector<double>{2.5}), RangeError);
}

TEST_CASE("the mixing counterexample") {
  for (double a : {1.5, 2.0}) {
    const CounterexampleValues v = counterexample_values(a);
    CHECK(v.mixture == ExtReal(0.0));
    CHECK(v.first.is_infinite());
    CHECK(v.second.is_infinite());
  }
  CHECK(counterexample_values(0.5).mixture == ExtReal(0.0));
  CHECK(counterexample_regression());
}

TEST_CASE("joint concavity fails below one half") {
  const ConcavitySearch s = search_joint_concavity_violation(7, 4000, 0.3);
  CHECK(s.trials == 4000);
  CHECK(s.worst_slack < 0.0);
  REQUIRE(s.witness.size() == 4);
  // recompute the witness with direct matrix powers
  const oracle::Mat r1 = s.witness[0].matrix(), s1 = s.witness[1].matrix();
  const oracle::Mat r2 = s.witness[2].matrix(), s2 = s.witness[3].matrix();
  const double slack = oracle::q_new(0.5 * (r1 + r2), 0.5 * (s1 + s2), 0.3) -
                       0.5 * (oracle::q_new(r1, s1, 0.3) + oracle::q_new(r2, s2, 0.3));
  CHECK(slack == doctest::Approx(s.worst_slack).epsilon(1e-6));
}

TEST_CASE("suite over all dims") {
  AuditSuiteConfig cfg;
  cfg.samples = 60;
  const std::vector<AuditReport> reports = run_audit_suite(cfg);
  CHECK(reports.size() == 8);
  for (const AuditReport& r : reports) {
    CAPTURE(r.id);
    CHECK(r.failures == 0);
    CHECK(r.samples == 180);
    CHECK(r.dims == std::vector<Index>{2, 3, 4});
  }
  cfg.alpha_grid = {0.3, 1.5};
  for (const AuditReport& r : run_audit_suite(cfg))
    if (r.id == "joint_convexity_new") CHECK(r.alpha_grid == std::vector<double>{1.5});
}
