#include "steer/discrimination.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "steer/error.hpp"
#include "steer/random.hpp"

namespace steer {
namespace {

constexpr double kAdvantageThreshold = 1e-6;

// |k> in C^dim
ComplexVector unit(std::size_t dim, std::size_t k) {
  ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(dim));
  v(static_cast<Eigen::Index>(k)) = 1.0;
  return v;
}

void check_witness(const OperatorGrid& f) {
  if (f.empty() || f.front().empty()) fail(ErrorKind::Validation, "witness is empty");
  const std::size_t na = f.front().size();
  const std::size_t d = f.front().front().dim();
  for (std::size_t x = 0; x < f.size(); ++x) {
    if (f[x].size() != na) fail(ErrorKind::Dimension, "witness rows differ in outcome count");
    for (std::size_t a = 0; a < na; ++a) {
      if (f[x][a].dim() != d) fail(ErrorKind::Dimension, "witness operators differ in dimension");
      if (min_eigenvalue(f[x][a]) < -1e-8)
        fail(ErrorKind::Validation, "witness F(a=" + std::to_string(a + 1) + ", x=" +
                                        std::to_string(x + 1) + ") is not PSD");
    }
  }
}

// sum_{y, listed a} Tr((M_{a|y} (x) Y_{a,y}) rho) where Y is supplied per (a, y).
template <class DualFn>
double oneway_sum(const OneWayStrategy& strategy, const BipartiteState& state, DualFn&& dual) {
  const std::size_t da = state.dim_a();
  const std::size_t db = state.dim_b();
  double p = 0.0;
  for (std::size_t y = 0; y < strategy.probe_outcomes(); ++y) {
    for (const auto& el : strategy.ancilla(y)) {
      const HermitianOperator effect = dual(el.branch, strategy.probe()[y]);
      // Tr((M (x) E) rho) = Tr(E rho_M) with rho_M = Tr_A((M (x) 1) rho)
      const ComplexMatrix mr =
          kron(el.op.matrix(), ComplexMatrix::Identity(static_cast<Eigen::Index>(db),
                                                       static_cast<Eigen::Index>(db))) *
          state.op().matrix();
      const HermitianOperator rho_m = partial_trace(symmetrize(mr), da, db, Subsystem::B);
      p += hs_inner(effect, rho_m);
    }
  }
  return p;
}

void check_compatible(const Instrument& inst, const OneWayStrategy& s, const BipartiteState& state) {
  if (inst.input_dim() != state.dim_b())
    fail(ErrorKind::Dimension, "instrument input dimension " + std::to_string(inst.input_dim()) +
                                   " does not match dB = " + std::to_string(state.dim_b()));
  if (s.probe().dim() != inst.output_dim())
    fail(ErrorKind::Dimension, "probe POVM does not act on the instrument output");
  if (s.ancilla_dim() != state.dim_a())
    fail(ErrorKind::Dimension, "ancilla POVM does not act on dA");
  if (s.branches() != inst.size())
    fail(ErrorKind::Dimension, "strategy names " + std::to_string(s.branches()) +
                                   " branches, instrument has " + std::to_string(inst.size()));
}

}  // namespace

ConstructedInstrument build_instrument(const OperatorGrid& witness, std::size_t padding,
                                       std::uint64_t seed) {
  check_witness(witness);
  if (padding == 0) fail(ErrorKind::Validation, "padding N must be at least 1");
  const std::size_t nx = witness.size();
  const std::size_t na = witness.front().size();
  const std::size_t d = witness.front().front().dim();
  const std::size_t dout = nx + 2;

  HermitianOperator total = HermitianOperator::zero(d);
  for (const auto& row : witness)
    for (const auto& f : row) total += f;
  const double norm = operator_norm(total);
  if (norm <= 1e-12) fail(ErrorKind::Validation, "degenerate witness: sum of F is zero");
  const double alpha = 1.0 / norm;

  std::vector<Subchannel> branches;
  for (std::size_t a = 0; a < na; ++a) {
    std::vector<ComplexMatrix> kraus;
    for (std::size_t x = 0; x < nx; ++x) {
      const auto e = eig_hermitian(witness[x][a]);
      for (Eigen::Index k = 0; k < e.eigenvalues.size(); ++k) {
        const double mu = e.eigenvalues(k);
        if (mu <= 0.0) continue;
        kraus.push_back(std::sqrt(alpha * mu) * unit(dout, x) * e.eigenvectors.col(k).adjoint());
      }
    }
    branches.emplace_back(d, dout, std::move(kraus));
  }

  const HermitianOperator g = psd_part(HermitianOperator::identity(d) - alpha * total);
  const auto ge = eig_hermitian(g);
  Rng rng(seed);
  std::vector<ComplexVector> pads;
  for (std::size_t k = 0; k < padding; ++k) {
    const ComplexVector q = haar_pure_state(2, rng);
    ComplexVector s = ComplexVector::Zero(static_cast<Eigen::Index>(dout));
    s(static_cast<Eigen::Index>(nx)) = q(0);
    s(static_cast<Eigen::Index>(nx + 1)) = q(1);
    std::vector<ComplexMatrix> kraus;
    for (Eigen::Index j = 0; j < ge.eigenvalues.size(); ++j) {
      const double gj = ge.eigenvalues(j);
      if (gj <= 0.0) continue;
      kraus.push_back(std::sqrt(gj / static_cast<double>(padding)) * s * ge.eigenvectors.col(j).adjoint());
    }
    branches.emplace_back(d, dout, std::move(kraus));
    pads.push_back(std::move(s));
  }

  return ConstructedInstrument{witness, alpha, padding, seed, std::move(pads), g,
                               Instrument(std::move(branches))};
}

ConstructedInstrument build_instrument(const SteeringReport& report, std::size_t padding,
                                       std::uint64_t seed) {
  return build_instrument(report.witness, padding, seed);
}

OneWayStrategy::OneWayStrategy(Povm probe, std::vector<std::vector<AncillaElement>> ancilla,
                               std::size_t branches)
    : probe_(std::move(probe)), ancilla_(std::move(ancilla)), branches_(branches), ancilla_dim_(0) {
  if (ancilla_.size() != probe_.size())
    fail(ErrorKind::Dimension, "one ancilla POVM per probe outcome is required (" +
                                   std::to_string(probe_.size()) + " probe outcomes, " +
                                   std::to_string(ancilla_.size()) + " ancilla POVMs)");
  for (std::size_t y = 0; y < ancilla_.size(); ++y) {
    const auto& els = ancilla_[y];
    if (els.empty()) fail(ErrorKind::Validation, "ancilla POVM " + std::to_string(y + 1) + " is empty");
    if (ancilla_dim_ == 0) ancilla_dim_ = els.front().op.dim();
    HermitianOperator sum = HermitianOperator::zero(ancilla_dim_);
    std::vector<bool> seen(branches_, false);
    for (const auto& el : els) {
      const std::string where = "ancilla POVM " + std::to_string(y + 1) + ", branch " +
                                std::to_string(el.branch + 1);
      if (el.branch >= branches_) fail(ErrorKind::Dimension, where + ": no such branch");
      if (seen[el.branch]) fail(ErrorKind::Validation, where + ": listed twice");
      seen[el.branch] = true;
      if (el.op.dim() != ancilla_dim_) fail(ErrorKind::Dimension, where + ": wrong dimension");
      if (min_eigenvalue(el.op) < -kTol) fail(ErrorKind::Validation, where + ": not PSD");
      sum += el.op;
    }
    if (max_abs((sum - HermitianOperator::identity(ancilla_dim_)).matrix()) > kTol)
      fail(ErrorKind::Validation, "ancilla POVM " + std::to_string(y + 1) + " does not sum to identity");
  }
}

OneWayStrategy OneWayStrategy::dense(Povm probe, const std::vector<Povm>& ancilla) {
  if (ancilla.empty()) fail(ErrorKind::Validation, "no ancilla POVMs");
  const std::size_t branches = ancilla.front().size();
  std::vector<std::vector<AncillaElement>> sparse;
  for (const auto& povm : ancilla) {
    if (povm.size() != branches) fail(ErrorKind::Dimension, "ancilla POVMs differ in outcome count");
    std::vector<AncillaElement> els;
    for (std::size_t b = 0; b < povm.size(); ++b) els.push_back({b, povm[b]});
    sparse.push_back(std::move(els));
  }
  return OneWayStrategy(std::move(probe), std::move(sparse), branches);
}

OneWayStrategy canonical_strategy(const ConstructedInstrument& inst,
                                  const MeasurementAssemblage& measurements) {
  const std::size_t nx = inst.settings();
  const std::size_t na = inst.outcomes();
  const std::size_t dout = inst.output_dim();
  if (measurements.settings() != nx || measurements.outcomes() != na)
    fail(ErrorKind::Dimension, "measurement assemblage shape does not match the witness");

  std::vector<HermitianOperator> probe;
  for (std::size_t x = 0; x < nx; ++x) probe.push_back(HermitianOperator::projector(unit(dout, x)));

  // Pretty-good measurement for the equiprobable pad states, restricted to
  // the support of their sum; the rest of the sector goes to the first element.
  HermitianOperator s = HermitianOperator::zero(dout);
  for (const auto& v : inst.pad_states) s += HermitianOperator::projector(v);
  const auto se = eig_hermitian(s);
  const double cutoff = 1e-12 * std::max(1.0, se.eigenvalues.maxCoeff());
  const auto inv_sqrt = spectral_map(s, [&](double v) { return v > cutoff ? 1.0 / std::sqrt(v) : 0.0; });
  HermitianOperator covered = HermitianOperator::zero(dout);
  std::vector<HermitianOperator> pgm;
  for (const auto& v : inst.pad_states) {
    pgm.push_back(HermitianOperator::projector(inv_sqrt.matrix() * v));
    covered += pgm.back();
  }
  HermitianOperator sector = HermitianOperator::projector(unit(dout, nx)) +
                             HermitianOperator::projector(unit(dout, nx + 1));
  pgm.front() += psd_part(sector - covered);
  for (auto& e : pgm) probe.push_back(std::move(e));

  std::vector<std::vector<AncillaElement>> ancilla;
  for (std::size_t x = 0; x < nx; ++x) {
    std::vector<AncillaElement> els;
    for (std::size_t a = 0; a < na; ++a) els.push_back({a, measurements.element(a, x)});
    ancilla.push_back(std::move(els));
  }
  const auto id_a = HermitianOperator::identity(measurements.dim());
  for (std::size_t k = 0; k < inst.padding; ++k) ancilla.push_back({{na + k, id_a}});

  return OneWayStrategy(Povm(std::move(probe)), std::move(ancilla), inst.instrument.size());
}

double pcorr_oneway(const Instrument& inst, const OneWayStrategy& strategy,
                    const BipartiteState& state) {
  check_compatible(inst, strategy, state);
  return oneway_sum(strategy, state, [&](std::size_t branch, const HermitianOperator& n) {
    return inst[branch].apply_dual(n);
  });
}

double pcorr_oneway_global(const Instrument& inst, const OneWayStrategy& strategy,
                           const BipartiteState& state) {
  check_compatible(inst, strategy, state);
  const std::size_t da = state.dim_a();
  const std::size_t dout = inst.output_dim();
  std::vector<HermitianOperator> q(inst.size(), HermitianOperator::zero(da * dout));
  for (std::size_t y = 0; y < strategy.probe_outcomes(); ++y)
    for (const auto& el : strategy.ancilla(y)) q[el.branch] += kron(el.op, strategy.probe()[y]);

  const ComplexMatrix id_a = ComplexMatrix::Identity(static_cast<Eigen::Index>(da),
                                                     static_cast<Eigen::Index>(da));
  double p = 0.0;
  for (std::size_t b = 0; b < inst.size(); ++b) {
    ComplexMatrix out = ComplexMatrix::Zero(static_cast<Eigen::Index>(da * dout),
                                            static_cast<Eigen::Index>(da * dout));
    for (const auto& k : inst[b].kraus()) {
      const ComplexMatrix big = kron(id_a, k);
      out += big * state.op().matrix() * big.adjoint();
    }
    p += hs_inner(q[b], symmetrize(out));
  }
  return p;
}

NeBracket pcorr_ne_bracket(const ConstructedInstrument& inst, std::size_t strategy_cap) {
  const double top = 1.0 - saturation_gap(inst.witness, strategy_cap);
  NeBracket b;
  b.low = inst.alpha * top;
  b.high = b.low + 2.0 / static_cast<double>(inst.padding);
  return b;
}

DiscriminationResult advantage_ratio(const BipartiteState& state,
                                     const MeasurementAssemblage& measurements, std::size_t padding,
                                     std::uint64_t seed, const RobustnessOptions& options) {
  if (measurements.dim() != state.dim_a())
    fail(ErrorKind::Dimension, "measurements act on dimension " + std::to_string(measurements.dim()) +
                                   ", state has dA = " + std::to_string(state.dim_a()));
  DiscriminationResult r;
  r.report = steering_robustness(assemblage_from_state(state, measurements), options);
  r.robustness = r.report.robustness;
  if (r.robustness <= kAdvantageThreshold)
    fail(ErrorKind::NoAdvantage, "the induced assemblage is unsteerable: R = " +
                                     format_number(r.robustness) + " <= 1e-6");
  const ConstructedInstrument inst = build_instrument(r.report, padding, seed);
  const OneWayStrategy strategy = canonical_strategy(inst, measurements);
  r.p_oneway = pcorr_oneway(inst.instrument, strategy, state);
  const NeBracket ne = pcorr_ne_bracket(inst, options.strategy_cap);
  r.p_ne_low = ne.low;
  r.p_ne_high = ne.high;
  r.ratio_low = r.p_oneway / ne.high;
  r.ratio_high = r.p_oneway / ne.low;
  r.alpha = inst.alpha;
  r.padding = padding;
  r.seed = seed;
  return r;
}

}  // namespace steer
