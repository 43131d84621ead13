#pragma once

// Complete sets of d+1 mutually unbiased bases in prime dimension and the
// steering lower bound they give for the maximally entangled state.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "steer/quantum.hpp"
#include "steer/robustness.hpp"

namespace steer {

inline constexpr std::size_t kDefaultMubDimensionCap = 7;
inline constexpr std::size_t kDefaultMubVerificationCap = 1000;

struct MubFamily {
  std::size_t d = 0;
  /// bases[x].col(a) = |psi_{a|x}>; bases[0] is the computational basis.
  std::vector<ComplexMatrix> bases;

  const ComplexMatrix& basis(std::size_t x) const { return bases.at(x); }
  ComplexVector vector(std::size_t a, std::size_t x) const { return bases.at(x).col(static_cast<Eigen::Index>(a)); }
};

bool is_prime(std::size_t n);

/// d = 2: Z, X, Y eigenbases. Odd prime d: basis k >= 1 has vectors with
/// components w^(k j^2 + a j) / sqrt(d), w = exp(2 pi i / d).
/// Throws ErrorKind::Unsupported for non-prime d and ErrorKind::Size above `cap`.
MubFamily build_mubs(std::size_t d, std::size_t cap = kDefaultMubDimensionCap);

/// max over all pairs of | |<psi_a|x|psi_b|y>|^2 - target |, target 1, 0 or 1/d.
double mub_overlap_error(const MubFamily& family);

MeasurementAssemblage mub_measurements(const MubFamily& family);

/// rho_{a|x} = |psi*_{a|x}><psi*_{a|x}| / d, from psi+_d and the projective MUB measurements.
Assemblage mub_assemblage(const MubFamily& family);

/// F_{a|x} = |psi*_{a|x}><psi*_{a|x}| / (sqrt(d) + 1)
OperatorGrid mub_beta_witness(const MubFamily& family);

struct SpectrumCheck {
  double mismatch = 0.0;  // max |sorted eig(Tr_D) - sorted eig(Tr_C)|
  double norm = 0.0;      // || sum_x |psi*_{f(x)|x}><psi*_{f(x)|x}| ||
  bool ok = false;        // mismatch <= 1e-8 and norm <= 1 + sqrt(d) + 1e-8
};

/// Builds |gamma> = sum_x |psi*_{f(x)|x}>_C |x>_D over the first f.settings()
/// bases and compares the spectra of its two marginals.
SpectrumCheck spectrum_identity_check(const MubFamily& family, const DeterministicStrategy& f);

struct MubOptions {
  std::size_t dimension_cap = kDefaultMubDimensionCap;
  /// SDP verification runs only when d^(d+1) is at most this.
  std::size_t verification_cap = kDefaultMubVerificationCap;
  std::uint64_t seed = 0;  // strategy sampling for the norm check when not enumerated
  RobustnessOptions robustness;
};

struct MubBoundReport {
  std::size_t d = 0;
  double analytic = 0.0;  // sqrt(d)(sqrt(d) - 1)/(sqrt(d) + 1)
  double coarse = 0.0;    // sqrt(d) - 2
  std::optional<double> sdp;
  bool verified = false;
  std::optional<double> norm_check_max;
  std::string note;
};

double mub_analytic_bound(std::size_t d);
double mub_coarse_bound(std::size_t d);

/// Analytic values always; SDP value and checks when d is a supported prime
/// and d^(d+1) fits the verification cap. Never throws for d >= 2.
MubBoundReport mub_bound_report(std::size_t d, const MubOptions& options = {});

}  // namespace steer
