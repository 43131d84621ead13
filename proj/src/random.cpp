#include "steer/random.hpp"

#include <cmath>

#include "steer/error.hpp"

namespace steer {

ComplexMatrix ginibre(std::size_t rows, std::size_t cols, Rng& rng) {
  ComplexMatrix g(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  const double s = std::sqrt(0.5);
  for (Eigen::Index j = 0; j < g.cols(); ++j)
    for (Eigen::Index i = 0; i < g.rows(); ++i) g(i, j) = Complex(s * rng.normal(), s * rng.normal());
  return g;
}

ComplexMatrix haar_unitary(std::size_t d, Rng& rng) {
  const ComplexMatrix g = ginibre(d, d, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index k = 0; k < q.cols(); ++k) {
    const double mag = std::abs(r(k, k));
    if (mag > 0) q.col(k) *= r(k, k) / mag;
  }
  return q;
}

ComplexVector haar_pure_state(std::size_t d, Rng& rng) { return haar_unitary(d, rng).col(0); }

QuantumState random_mixed_state(std::size_t d, std::size_t env, Rng& rng) {
  const ComplexVector psi = haar_pure_state(d * env, rng);
  const auto rho = partial_trace(HermitianOperator::projector(psi), d, env, Subsystem::A);
  // Renormalize away the roundoff in the trace.
  return QuantumState((1.0 / rho.trace()) * rho);
}

HermitianOperator random_hermitian(std::size_t d, Rng& rng) {
  return symmetrize(ginibre(d, d, rng));
}

HermitianOperator random_psd(std::size_t d, std::size_t rank, Rng& rng) {
  const ComplexMatrix g = ginibre(d, rank, rng);
  return symmetrize(g * g.adjoint());
}

Povm random_povm(std::size_t d, std::size_t outcomes, Rng& rng) {
  if (outcomes == 0) fail(ErrorKind::Validation, "random POVM: need at least one outcome");
  std::vector<HermitianOperator> g;
  HermitianOperator sum = HermitianOperator::zero(d);
  std::size_t total_rank = 0;
  for (std::size_t k = 0; k < outcomes; ++k) {
    // The last element tops up the rank so the sum is invertible.
    std::size_t rank = 1 + rng.index(d);
    if (k + 1 == outcomes && total_rank + rank < d) rank = d;
    total_rank += rank;
    g.push_back(random_psd(d, rank, rng));
    sum += g.back();
  }
  const auto inv_sqrt = spectral_map(sum, [](double x) { return 1.0 / std::sqrt(x); });
  std::vector<HermitianOperator> elements;
  for (const auto& gk : g) elements.push_back(congruence(inv_sqrt.matrix(), gk));
  return Povm(std::move(elements));
}

MeasurementAssemblage random_measurement_assemblage(std::size_t d, std::size_t outcomes,
                                                    std::size_t settings, Rng& rng) {
  std::vector<Povm> povms;
  for (std::size_t x = 0; x < settings; ++x) povms.push_back(random_povm(d, outcomes, rng));
  return MeasurementAssemblage(std::move(povms));
}

DeterministicStrategy random_strategy(std::size_t outcomes, std::size_t settings, Rng& rng) {
  std::vector<std::size_t> f(settings);
  for (auto& v : f) v = rng.index(outcomes);
  return DeterministicStrategy(std::move(f), outcomes);
}

Instrument random_instrument(std::size_t input_dim, std::size_t output_dim,
                             std::size_t branches, std::size_t kraus_per_branch, Rng& rng) {
  const std::size_t total = branches * kraus_per_branch;
  const std::size_t rows = output_dim * total;
  if (rows < input_dim) fail(ErrorKind::Dimension, "random instrument: too few Kraus operators");
  const ComplexMatrix u = haar_unitary(rows, rng);
  const ComplexMatrix v = u.leftCols(static_cast<Eigen::Index>(input_dim));
  std::vector<Subchannel> out;
  const auto dout = static_cast<Eigen::Index>(output_dim);
  for (std::size_t b = 0; b < branches; ++b) {
    std::vector<ComplexMatrix> kraus;
    for (std::size_t k = 0; k < kraus_per_branch; ++k) {
      const auto row = static_cast<Eigen::Index>(b * kraus_per_branch + k) * dout;
      kraus.push_back(v.middleRows(row, dout));
    }
    out.emplace_back(input_dim, output_dim, std::move(kraus));
  }
  return Instrument(std::move(out));
}

}  // namespace steer
