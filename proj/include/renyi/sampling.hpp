#pragma once

// Seeded random operators. Every sample gets its own generator derived from
// (seed, stream, index), so results do not depend on evaluation order.

#include <cstdint>
#include <random>
#include <vector>

#include "renyi/operator.hpp"

namespace renyi {

using Rng = std::mt19937_64;

/// Parameters of a random state ensemble. purity_bias is the probability that
/// a sample is drawn with a random rank below dim instead of full rank.
struct Ensemble {
  Index dim = 2;
  int count = 500;
  std::uint64_t seed = 1;
  double purity_bias = 0.2;
};

Rng substream(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);

/// G G^dagger / Tr G G^dagger with G a dim x rank standard complex Gaussian.
DensityOp random_density(Rng& rng, Index dim, Index rank);
DensityOp random_full_rank_density(Rng& rng, Index dim);
/// Rank drawn according to the ensemble's purity bias.
DensityOp random_density(Rng& rng, const Ensemble& ens);
/// Random density rescaled by a log-normal factor.
PSDOp random_psd(Rng& rng, Index dim, Index rank);
DensityOp random_diagonal_density(Rng& rng, Index dim);

Matrix random_unitary(Rng& rng, Index dim);
/// Uniform point of the probability simplex with r entries.
std::vector<double> random_simplex(Rng& rng, int r);
Index random_rank(Rng& rng, const Ensemble& ens);

}  // namespace renyi
