#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "renyi/operator.hpp"

using namespace renyi;

namespace {

Matrix diag_matrix(std::initializer_list<double> v) {
  return oracle::diag(std::vector<double>(v));
}

PSDOp random_psd(std::mt19937_64& rng, int d, int rank = -1) {
  std::exponential_distribution<double> e(1.0);
  return PSDOp(oracle::random_state(rng, d, rank) * (0.5 + e(rng)));
}

}  // namespace

TEST_CASE("operator types validate their invariants") {
  Matrix m(2, 2);
  m << 1.0, std::complex<double>(0.0, 1.0), 0.0, 1.0;
  CHECK_THROWS_AS(HermitianOp{m}, InvalidOperator);
  CHECK_THROWS_AS(PSDOp{diag_matrix({1.0, -1.0})}, InvalidOperator);
  CHECK_THROWS_AS(PSDOp{Matrix::Zero(2, 2)}, InvalidOperator);
  CHECK_THROWS_AS(DensityOp{diag_matrix({0.5, 0.6})}, InvalidOperator);
  CHECK_THROWS_AS(HermitianOp{Matrix(2, 3)}, InvalidOperator);
  CHECK_NOTHROW(DensityOp{diag_matrix({0.75, 0.25})});
  // tiny negative eigenvalue inside the tolerance
  CHECK_NOTHROW(PSDOp{diag_matrix({1.0, -1e-12})});
}

TEST_CASE("support_power examples") {
  const PSDOp a = PSDOp::diagonal({2.0, 0.0});
  CHECK(support_power(a, -1.0).matrix().isApprox(diag_matrix({0.5, 0.0})));
  CHECK(support_power(a, 0.0).matrix().isApprox(diag_matrix({1.0, 0.0})));
  CHECK(support_power(PSDOp::diagonal({4.0, 1.0}), 0.5).matrix().isApprox(diag_matrix({2.0, 1.0})));
}

TEST_CASE("support_power is a semigroup on the support") {
  std::mt19937_64 rng(11);
  const double exps[] = {-1.0, -0.5, 0.3, 1.0, 2.0};
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 2 + trial % 3;
    const PSDOp a = random_psd(rng, d, trial % 2 == 0 ? d : d - 1);
    for (double x : exps)
      for (double y : exps) {
        const Matrix lhs = support_power(a, x).matrix() * support_power(a, y).matrix();
        const Matrix rhs = support_power(a, x + y).matrix();
        const double scale = std::max(1.0, rhs.cwiseAbs().maxCoeff());
        CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-9 * scale);
      }
  }
}

TEST_CASE("positive_part_projection") {
  CHECK(positive_part_projection(HermitianOp::diagonal(std::vector<double>{1.0, -2.0}))
            .matrix()
            .isApprox(diag_matrix({1.0, 0.0})));
  CHECK(positive_part_projection(HermitianOp::zero(3)).matrix().norm() == 0.0);

  std::mt19937_64 rng(5);
  const Matrix u = oracle::random_unitary(rng, 3);
  const HermitianOp x(u * diag_matrix({3.0, -1.0, 2.0}) * u.adjoint());
  const Matrix p = positive_part_projection(x).matrix();
  const Matrix expected = u.col(0) * u.col(0).adjoint() + u.col(2) * u.col(2).adjoint();
  CHECK((p - expected).norm() < 1e-10);
  CHECK((p * p - p).norm() < 1e-10);
  CHECK((p * x.matrix() - x.matrix() * p).norm() < 1e-10);
  CHECK((x.matrix() * p).trace().real() == doctest::Approx(5.0).epsilon(1e-12));
}

TEST_CASE("trace_norm") {
  CHECK(trace_norm(HermitianOp::diagonal(std::vector<double>{1.0, -2.0})) == doctest::Approx(3.0));
  CHECK(trace_norm(HermitianOp::zero(2)) == 0.0);
  const auto rho = DensityOp::diagonal({0.75, 0.25});
  const auto sigma = DensityOp::diagonal({0.5, 0.5});
  // classical: sum |p - q| = 2|0.75 - 0.5|
  CHECK(trace_norm(rho - sigma) == doctest::Approx(2.0 * 0.25).epsilon(1e-14));
}

TEST_CASE("trace norm identity for the positive-part projection") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    const int d = 2 + trial % 3;
    const PSDOp a = random_psd(rng, d), b = random_psd(rng, d);
    const Matrix p = positive_part_projection(a - b).matrix();
    const Matrix id = Matrix::Identity(d, d);
    const double lhs = 0.5 * (a.trace() + b.trace()) - 0.5 * trace_norm(a - b);
    const double rhs = (a.matrix() * (id - p)).trace().real() + (b.matrix() * p).trace().real();
    CHECK(std::abs(lhs - rhs) <= 1e-9);
  }
}

TEST_CASE("tensor products") {
  CHECK(tensor(PSDOp::identity(2), PSDOp::identity(2)).matrix().isApprox(Matrix::Identity(4, 4)));
  CHECK(tensor(PSDOp::diagonal({1.0, 0.0}), PSDOp::diagonal({0.0, 1.0}))
            .matrix()
            .isApprox(diag_matrix({0.0, 1.0, 0.0, 0.0})));

  std::mt19937_64 rng(3);
  const Matrix r = oracle::random_state(rng, 2), s = oracle::random_state(rng, 3);
  const DensityOp rho(r), sigma(s);
  const DensityOp t = tensor(rho, sigma);
  CHECK((t.matrix() - oracle::kron(r, s)).norm() < 1e-14);

  Eigen::SelfAdjointEigenSolver<Matrix> er(r), es(s), et(t.matrix());
  std::vector<double> prod;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 3; ++j) prod.push_back(er.eigenvalues()[i] * es.eigenvalues()[j]);
  std::sort(prod.begin(), prod.end());
  for (int k = 0; k < 6; ++k) CHECK(et.eigenvalues()[k] == doctest::Approx(prod[static_cast<std::size_t>(k)]).epsilon(1e-10));
}

TEST_CASE("tensor powers") {
  std::mt19937_64 rng(4);
  const PSDOp a = random_psd(rng, 3);
  CHECK(tensor_power(a, 1).matrix() == a.matrix());
  CHECK(tensor_power(PSDOp::diagonal({2.0, 3.0}), 2).matrix().isApprox(diag_matrix({4.0, 6.0, 6.0, 9.0})));
  CHECK(tensor_power(a, 3).trace() == doctest::Approx(std::pow(a.trace(), 3)).epsilon(1e-12));
  CHECK_THROWS_AS(tensor_power(a, 3, 20), CapExceeded);
  CHECK_THROWS_AS(tensor(a, a, 8), CapExceeded);
  CHECK_NOTHROW(tensor_power(a, 2, 9));
  try {
    tensor_power(PSDOp::identity(2), 13);
    FAIL("expected cap error");
  } catch (const CapExceeded& e) {
    CHECK(e.requested() == 8192);
    CHECK(e.cap() == default_dim_cap());
  }
}

TEST_CASE("partial traces") {
  std::mt19937_64 rng(8);
  const PSDOp a = random_psd(rng, 2), b = random_psd(rng, 3);
  const PSDOp ab = tensor(a, b);
  CHECK((partial_trace(ab, 2, 3, TraceOut::Second).matrix() - b.trace() * a.matrix()).norm() < 1e-10);
  CHECK((partial_trace(ab, 2, 3, TraceOut::First).matrix() - a.trace() * b.matrix()).norm() < 1e-10);

  Vector bell = Vector::Zero(4);
  bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
  const DensityOp phi = DensityOp::pure(bell);
  CHECK(partial_trace(phi, 2, 2, TraceOut::First).matrix().isApprox(Matrix::Identity(2, 2) / 2.0));
  CHECK(partial_trace(phi, 2, 2, TraceOut::Second).matrix().isApprox(Matrix::Identity(2, 2) / 2.0));

  const Matrix x = oracle::random_state(rng, 6);
  const HermitianOp hx(x);
  CHECK((partial_trace(hx, 2, 3, TraceOut::Second).matrix() - oracle::trace_b(x, 2, 3)).norm() < 1e-12);
  CHECK((partial_trace(hx, 2, 3, TraceOut::First).matrix() - oracle::trace_a(x, 2, 3)).norm() < 1e-12);
  CHECK_THROWS_AS(partial_trace(hx, 2, 2, TraceOut::First), DimensionMismatch);
}

TEST_CASE("fidelity") {
  std::mt19937_64 rng(9);
  const DensityOp rho(oracle::random_state(rng, 3));
  CHECK(fidelity(rho, rho) == doctest::Approx(1.0).epsilon(1e-10));
  const double expected = std::sqrt(0.5 * 0.75) + std::sqrt(0.5 * 0.25);
  CHECK(fidelity(DensityOp::diagonal({0.5, 0.5}), DensityOp::diagonal({0.75, 0.25})) ==
        doctest::Approx(expected).epsilon(1e-12));
  CHECK(fidelity(DensityOp::diagonal({1.0, 0.0}), DensityOp::diagonal({0.0, 1.0})) ==
        doctest::Approx(0.0));

  const DensityOp sigma(oracle::random_state(rng, 3));
  CHECK(fidelity(rho, sigma) == doctest::Approx(fidelity(sigma, rho)).epsilon(1e-9));
  CHECK(fidelity(rho, sigma) == doctest::Approx(oracle::fidelity(rho.matrix(), sigma.matrix())).epsilon(1e-9));
}

TEST_CASE("fidelity does not decrease under partial trace") {
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 50; ++trial) {
    const PSDOp x = random_psd(rng, 6), y = random_psd(rng, 6);
    const double whole = fidelity(x, y);
    const double reduced =
        fidelity(partial_trace(x, 2, 3, TraceOut::Second), partial_trace(y, 2, 3, TraceOut::Second));
    CHECK(reduced >= whole - 1e-9);
  }
}

TEST_CASE("spectral decomposition") {
  std::mt19937_64 rng(12);
  const Matrix u = oracle::random_unitary(rng, 4);
  const HermitianOp x(u * diag_matrix({2.0, 2.0, -1.0, 0.5}) * u.adjoint());
  const SpectralDecomposition sd = spectral_decomposition(x);
  REQUIRE(sd.eigenvalues.size() == 3);
  CHECK(sd.eigenvalues[0] == doctest::Approx(2.0));
  CHECK(sd.eigenvalues[2] == doctest::Approx(-1.0));
  Matrix sum = Matrix::Zero(4, 4);
  for (std::size_t i = 0; i < sd.projectors.size(); ++i) {
    const Matrix& p = sd.projectors[i].matrix();
    CHECK((p * p - p).norm() < 1e-10);
    for (std::size_t j = i + 1; j < sd.projectors.size(); ++j)
      CHECK((p * sd.projectors[j].matrix()).norm() < 1e-10);
    sum += p;
  }
  CHECK((sum - Matrix::Identity(4, 4)).norm() < 1e-10);
  CHECK(operator_norm(sd.reconstruct() - x) <= 1e-10);
}

TEST_CASE("support inclusion") {
  CHECK(support_included(PSDOp::diagonal({1.0, 0.0}), PSDOp::diagonal({1.0, 1.0})));
  CHECK_FALSE(support_included(PSDOp::diagonal({1.0, 1.0}), PSDOp::diagonal({1.0, 0.0})));
  CHECK_FALSE(support_included(PSDOp::diagonal({1.0, 0.0}), PSDOp::diagonal({0.0, 1.0})));
}

TEST_CASE("entanglement fidelity") {
  std::mt19937_64 rng(13);
  const DensityOp rho(oracle::random_state(rng, 3));
  const std::vector<Matrix> id{Matrix::Identity(3, 3)};
  CHECK(entanglement_fidelity(rho, id) == doctest::Approx(1.0).epsilon(1e-12));

  // complete depolarization of a qubit with Kraus operators Pauli/2
  Matrix x(2, 2), y(2, 2), z(2, 2);
  x << 0, 1, 1, 0;
  y << 0, std::complex<double>(0, -1), std::complex<double>(0, 1), 0;
  z << 1, 0, 0, -1;
  const std::vector<Matrix> dep{Matrix::Identity(2, 2) / 2.0, x / 2.0, y / 2.0, z / 2.0};
  CHECK(entanglement_fidelity(DensityOp::maximally_mixed(2), dep) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(entanglement_fidelity(DensityOp::maximally_mixed(2), dep) ==
        doctest::Approx(oracle::entanglement_fidelity(Matrix::Identity(2, 2) / 2.0, dep)).epsilon(1e-12));

  // random channel from an isometry
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix v = oracle::random_unitary(rng, 6).leftCols(3);
    std::vector<Matrix> kraus{v.topRows(3), v.bottomRows(3)};
    CHECK(is_trace_preserving(kraus));
    const DensityOp r(oracle::random_state(rng, 3, 1 + trial % 3));
    CHECK(entanglement_fidelity(r, kraus) ==
          doctest::Approx(oracle::entanglement_fidelity(r.matrix(), kraus)).epsilon(1e-10));
  }

  const std::vector<Matrix> bad{Matrix::Identity(2, 2) * 0.5};
  CHECK_THROWS_AS(entanglement_fidelity(DensityOp::maximally_mixed(2), bad), InvalidOperator);
}
