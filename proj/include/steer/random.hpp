#pragma once

// Seeded random fixtures: Haar states and unitaries, random POVMs, random
// instruments. Everything draws from one std::mt19937_64 so a seed fixes the
// whole stream.

#include <cstdint>
#include <random>

#include "steer/quantum.hpp"

namespace steer {

class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const noexcept { return seed_; }
  double normal() { return normal_(engine_); }
  double uniform() { return uniform_(engine_); }
  /// Uniform in [0, n).
  std::size_t index(std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_);
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

/// Entries i.i.d. standard complex Gaussian.
ComplexMatrix ginibre(std::size_t rows, std::size_t cols, Rng& rng);

/// Haar unitary from the QR decomposition of a Ginibre matrix with the phases
/// of R's diagonal absorbed into Q.
ComplexMatrix haar_unitary(std::size_t d, Rng& rng);

/// Haar-random unit vector (first column of a Haar unitary).
ComplexVector haar_pure_state(std::size_t d, Rng& rng);

/// Partial trace of a Haar pure state on C^d (x) C^env.
QuantumState random_mixed_state(std::size_t d, std::size_t env, Rng& rng);

/// GUE-like Hermitian matrix.
HermitianOperator random_hermitian(std::size_t d, Rng& rng);

/// G G^dag with G Ginibre d x rank.
HermitianOperator random_psd(std::size_t d, std::size_t rank, Rng& rng);

/// P_k = S^{-1/2} G_k S^{-1/2} with G_k random PSD, S = sum_k G_k.
Povm random_povm(std::size_t d, std::size_t outcomes, Rng& rng);

MeasurementAssemblage random_measurement_assemblage(std::size_t d, std::size_t outcomes,
                                                    std::size_t settings, Rng& rng);

DeterministicStrategy random_strategy(std::size_t outcomes, std::size_t settings, Rng& rng);

/// Stinespring split: a Haar isometry C^in -> C^out (x) C^(branches*kraus)
/// cut into `branches` groups of `kraus_per_branch` Kraus operators.
Instrument random_instrument(std::size_t input_dim, std::size_t output_dim,
                             std::size_t branches, std::size_t kraus_per_branch, Rng& rng);

}  // namespace steer
