#include "renyi/sampling.hpp"

#include <cmath>

namespace renyi {

Rng substream(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(index >> 32)};
  return Rng(seq);
}

namespace {

Matrix gaussian(Rng& rng, Index rows, Index cols) {
  std::normal_distribution<double> n01(0.0, 1.0);
  Matrix g(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) g(i, j) = {n01(rng), n01(rng)};
  return g;
}

}  // namespace

DensityOp random_density(Rng& rng, Index dim, Index rank) {
  if (dim < 1 || rank < 1 || rank > dim) throw RangeError("random_density: need 1 <= rank <= dim");
  const Matrix g = gaussian(rng, dim, rank);
  Matrix m = g * g.adjoint();
  m /= m.trace().real();
  return DensityOp(std::move(m), unchecked);
}

DensityOp random_full_rank_density(Rng& rng, Index dim) { return random_density(rng, dim, dim); }

Index random_rank(Rng& rng, const Ensemble& ens) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  if (ens.dim == 1 || u(rng) >= ens.purity_bias) return ens.dim;
  std::uniform_int_distribution<Index> k(1, ens.dim - 1);
  return k(rng);
}

DensityOp random_density(Rng& rng, const Ensemble& ens) {
  const Index rank = random_rank(rng, ens);
  return random_density(rng, ens.dim, rank);
}

PSDOp random_psd(Rng& rng, Index dim, Index rank) {
  std::normal_distribution<double> n01(0.0, 1.0);
  const double scale = std::exp(0.5 * n01(rng));
  return PSDOp(scale * random_density(rng, dim, rank).matrix(), unchecked);
}

DensityOp random_diagonal_density(Rng& rng, Index dim) {
  const std::vector<double> p = random_simplex(rng, static_cast<int>(dim));
  return DensityOp::diagonal(std::span<const double>(p));
}

Matrix random_unitary(Rng& rng, Index dim) {
  Eigen::HouseholderQR<Matrix> qr(gaussian(rng, dim, dim));
  Matrix q = qr.householderQ() * Matrix::Identity(dim, dim);
  const Matrix r = qr.matrixQR();
  // fix the phases so the distribution is Haar
  for (Index j = 0; j < dim; ++j) {
    const double a = std::abs(r(j, j));
    if (a > 0.0) q.col(j) *= r(j, j) / a;
  }
  return q;
}

std::vector<double> random_simplex(Rng& rng, int r) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> p(static_cast<std::size_t>(r));
  double s = 0.0;
  for (double& x : p) s += (x = e(rng));
  for (double& x : p) x /= s;
  return p;
}

}  // namespace renyi
