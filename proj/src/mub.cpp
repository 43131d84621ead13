#include "steer/mub.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "steer/error.hpp"
#include "steer/random.hpp"

namespace steer {
namespace {

ComplexMatrix basis_from_columns(std::initializer_list<std::initializer_list<Complex>> cols, double scale) {
  const auto n = static_cast<Eigen::Index>(cols.size());
  ComplexMatrix m(n, n);
  Eigen::Index j = 0;
  for (const auto& c : cols) {
    Eigen::Index i = 0;
    for (const auto& v : c) m(i++, j) = scale * v;
    ++j;
  }
  return m;
}

ComplexVector conjugate(const ComplexVector& v) { return v.conjugate(); }

}  // namespace

bool is_prime(std::size_t n) {
  if (n < 2) return false;
  for (std::size_t k = 2; k * k <= n; ++k)
    if (n % k == 0) return false;
  return true;
}

MubFamily build_mubs(std::size_t d, std::size_t cap) {
  if (!is_prime(d))
    fail(ErrorKind::Unsupported, "MUB construction needs a prime dimension, got d = " + std::to_string(d));
  if (d > cap)
    fail(ErrorKind::Size, "MUB dimension " + std::to_string(d) + " exceeds the cap " + std::to_string(cap));
  MubFamily fam;
  fam.d = d;
  const auto n = static_cast<Eigen::Index>(d);
  fam.bases.push_back(ComplexMatrix::Identity(n, n));
  if (d == 2) {
    const double r = 1.0 / std::sqrt(2.0);
    const Complex i(0, 1);
    fam.bases.push_back(basis_from_columns({{1, 1}, {1, -1}}, r));
    fam.bases.push_back(basis_from_columns({{1, i}, {1, -i}}, r));
    return fam;
  }
  const double r = 1.0 / std::sqrt(static_cast<double>(d));
  for (std::size_t k = 1; k <= d; ++k) {
    ComplexMatrix b(n, n);
    for (std::size_t a = 0; a < d; ++a) {
      for (std::size_t j = 0; j < d; ++j) {
        // Reduce the exponent mod d before forming the phase.
        const std::size_t e = (k * j % d * j + a * j) % d;
        const double phase = 2.0 * std::numbers::pi * static_cast<double>(e) / static_cast<double>(d);
        b(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(a)) = r * std::polar(1.0, phase);
      }
    }
    fam.bases.push_back(std::move(b));
  }
  return fam;
}

double mub_overlap_error(const MubFamily& family) {
  const double inv_d = 1.0 / static_cast<double>(family.d);
  double err = 0.0;
  for (std::size_t x = 0; x < family.bases.size(); ++x) {
    for (std::size_t y = x; y < family.bases.size(); ++y) {
      const ComplexMatrix g = family.bases[x].adjoint() * family.bases[y];
      for (Eigen::Index a = 0; a < g.rows(); ++a) {
        for (Eigen::Index b = 0; b < g.cols(); ++b) {
          const double target = x != y ? inv_d : (a == b ? 1.0 : 0.0);
          err = std::max(err, std::abs(std::norm(g(a, b)) - target));
        }
      }
    }
  }
  return err;
}

MeasurementAssemblage mub_measurements(const MubFamily& family) {
  std::vector<Povm> povms;
  for (const auto& b : family.bases) povms.push_back(projective_measurement(b));
  return MeasurementAssemblage(std::move(povms));
}

Assemblage mub_assemblage(const MubFamily& family) {
  return assemblage_from_state(maximally_entangled_state(family.d), mub_measurements(family));
}

OperatorGrid mub_beta_witness(const MubFamily& family) {
  const double beta = 1.0 / (std::sqrt(static_cast<double>(family.d)) + 1.0);
  OperatorGrid f(family.bases.size());
  for (std::size_t x = 0; x < family.bases.size(); ++x)
    for (std::size_t a = 0; a < family.d; ++a)
      f[x].push_back(beta * HermitianOperator::projector(conjugate(family.vector(a, x))));
  return f;
}

SpectrumCheck spectrum_identity_check(const MubFamily& family, const DeterministicStrategy& f) {
  const std::size_t nx = f.settings();
  if (nx == 0 || nx > family.bases.size() || f.outcomes() != family.d)
    fail(ErrorKind::Dimension, "strategy does not match the MUB family");
  const std::size_t d = family.d;
  ComplexVector gamma = ComplexVector::Zero(static_cast<Eigen::Index>(d * nx));
  for (std::size_t x = 0; x < nx; ++x) {
    const ComplexVector v = conjugate(family.vector(f.outcome(x), x));
    for (std::size_t i = 0; i < d; ++i) gamma(static_cast<Eigen::Index>(i * nx + x)) = v(static_cast<Eigen::Index>(i));
  }
  const auto g = HermitianOperator::projector(gamma);
  const RealVector on_c = eigenvalues(partial_trace(g, d, nx, Subsystem::A));
  const RealVector on_d = eigenvalues(partial_trace(g, d, nx, Subsystem::B));
  // Compare descending, padding the shorter spectrum with zeros.
  const Eigen::Index n = std::max(on_c.size(), on_d.size());
  SpectrumCheck out;
  for (Eigen::Index k = 0; k < n; ++k) {
    const double u = k < on_c.size() ? on_c(on_c.size() - 1 - k) : 0.0;
    const double w = k < on_d.size() ? on_d(on_d.size() - 1 - k) : 0.0;
    out.mismatch = std::max(out.mismatch, std::abs(u - w));
  }
  out.norm = on_c(on_c.size() - 1);
  out.ok = out.mismatch <= 1e-8 && out.norm <= 1.0 + std::sqrt(static_cast<double>(d)) + 1e-8;
  return out;
}

double mub_analytic_bound(std::size_t d) {
  const double s = std::sqrt(static_cast<double>(d));
  return s * (s - 1.0) / (s + 1.0);
}

double mub_coarse_bound(std::size_t d) { return std::sqrt(static_cast<double>(d)) - 2.0; }

MubBoundReport mub_bound_report(std::size_t d, const MubOptions& options) {
  MubBoundReport r;
  r.d = d;
  r.analytic = mub_analytic_bound(d);
  r.coarse = mub_coarse_bound(d);
  if (d < 2) {
    r.note = "dimension must be at least 2";
    return r;
  }
  if (!is_prime(d)) {
    r.note = "construction needs a prime dimension; analytic values only";
    return r;
  }
  if (d > options.dimension_cap) {
    r.note = "dimension above the construction cap; analytic values only";
    return r;
  }
  try {
    const MubFamily fam = build_mubs(d, options.dimension_cap);
    const std::size_t count = strategy_count(d, d + 1, options.verification_cap);

    double worst = 0.0;
    bool spectra_ok = true;
    if (count <= options.verification_cap) {
      for (const auto& f : enumerate_strategies(d, d + 1, options.verification_cap)) {
        const auto c = spectrum_identity_check(fam, f);
        worst = std::max(worst, c.norm);
        spectra_ok = spectra_ok && c.ok;
      }
    } else {
      Rng rng(options.seed);
      for (int k = 0; k < 50; ++k) {
        const auto c = spectrum_identity_check(fam, random_strategy(d, d + 1, rng));
        worst = std::max(worst, c.norm);
        spectra_ok = spectra_ok && c.ok;
      }
    }
    r.norm_check_max = worst;

    if (count > options.verification_cap) {
      r.note = std::to_string(d) + "^" + std::to_string(d + 1) +
               " strategies exceed the verification cap; analytic values only";
      return r;
    }
    RobustnessOptions ro = options.robustness;
    ro.strategy_cap = std::max(ro.strategy_cap, options.verification_cap);
    const SteeringReport rep = steering_robustness(mub_assemblage(fam), ro);
    r.sdp = rep.robustness;
    const double upper = static_cast<double>(d) - 1.0;
    r.verified = rep.optimal() && spectra_ok && rep.robustness >= r.analytic - 1e-6 &&
                 r.analytic >= r.coarse - 1e-6 && rep.robustness <= upper + 1e-6;
    if (!r.verified) r.note = "bound chain not confirmed by the SDP";
  } catch (const Error& e) {
    r.note = e.what();
  }
  return r;
}

}  // namespace steer
