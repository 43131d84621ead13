#include "steer/quantum.hpp"

#include <cmath>
#include <sstream>

#include "steer/error.hpp"

namespace steer {

namespace {

std::string label(std::size_t a, std::size_t x) {
  std::ostringstream os;
  os << "(a=" << a + 1 << ", x=" << x + 1 << ")";
  return os.str();
}

}  // namespace

QuantumState::QuantumState(HermitianOperator op) : op_(std::move(op)) {
  if (op_.dim() == 0) fail(ErrorKind::Validation, "state: empty operator");
  const double tr = op_.trace();
  if (std::abs(tr - 1.0) > kTol) {
    std::ostringstream os;
    os << "state: trace " << tr << " is not 1";
    fail(ErrorKind::Validation, os.str());
  }
  const double lo = min_eigenvalue(op_);
  if (lo < -kTol) {
    std::ostringstream os;
    os << "state: not positive semidefinite (min eigenvalue " << lo << ")";
    fail(ErrorKind::Validation, os.str());
  }
}

double QuantumState::purity() const { return hs_inner(op_, op_); }

BipartiteState::BipartiteState(QuantumState state, std::size_t dim_a, std::size_t dim_b)
    : state_(std::move(state)), dim_a_(dim_a), dim_b_(dim_b) {
  if (dim_a == 0 || dim_b == 0 || dim_a * dim_b != state_.dim()) {
    std::ostringstream os;
    os << "bipartite state: dims " << dim_a << "x" << dim_b << " do not match operator dimension "
       << state_.dim();
    fail(ErrorKind::Dimension, os.str());
  }
}

HermitianOperator BipartiteState::reduced_a() const {
  return partial_trace(op(), dim_a_, dim_b_, Subsystem::A);
}

HermitianOperator BipartiteState::reduced_b() const {
  return partial_trace(op(), dim_a_, dim_b_, Subsystem::B);
}

BipartiteState maximally_entangled_state(std::size_t d) {
  std::vector<double> p(d, 1.0 / static_cast<double>(d));
  return schmidt_state(p);
}

BipartiteState schmidt_state(std::span<const double> p) {
  const std::size_t d = p.size();
  if (d == 0) fail(ErrorKind::Validation, "Schmidt state: no coefficients");
  ComplexVector psi = ComplexVector::Zero(static_cast<Eigen::Index>(d * d));
  for (std::size_t i = 0; i < d; ++i) {
    if (p[i] < 0) fail(ErrorKind::Validation, "Schmidt state: negative coefficient");
    psi(static_cast<Eigen::Index>(i * d + i)) = std::sqrt(p[i]);
  }
  return BipartiteState(QuantumState(HermitianOperator::projector(psi)), d, d);
}

Povm::Povm(std::vector<HermitianOperator> elements) : elements_(std::move(elements)) {
  if (elements_.empty()) fail(ErrorKind::Validation, "POVM: no elements");
  const std::size_t d = elements_.front().dim();
  HermitianOperator sum = HermitianOperator::zero(d);
  for (std::size_t i = 0; i < elements_.size(); ++i) {
    const auto& e = elements_[i];
    if (e.dim() != d) fail(ErrorKind::Dimension, "POVM: elements of different dimension");
    const double lo = min_eigenvalue(e);
    if (lo < -kPsdTol) {
      std::ostringstream os;
      os << "POVM: element " << i + 1 << " not positive semidefinite (min eigenvalue " << lo << ")";
      fail(ErrorKind::Validation, os.str());
    }
    sum += e;
  }
  const double dev = max_abs(sum.matrix() - ComplexMatrix::Identity(sum.dim(), sum.dim()));
  if (dev > kCompletenessTol) {
    std::ostringstream os;
    os << "POVM: elements do not sum to identity (deviation " << dev << ")";
    fail(ErrorKind::Validation, os.str());
  }
}

Povm projective_measurement(const ComplexMatrix& basis) {
  std::vector<HermitianOperator> elements;
  elements.reserve(static_cast<std::size_t>(basis.cols()));
  for (Eigen::Index k = 0; k < basis.cols(); ++k)
    elements.push_back(HermitianOperator::projector(basis.col(k)));
  return Povm(std::move(elements));
}

MeasurementAssemblage::MeasurementAssemblage(std::vector<Povm> povms) : povms_(std::move(povms)) {
  if (povms_.empty()) fail(ErrorKind::Validation, "measurement assemblage: no settings");
  for (std::size_t x = 1; x < povms_.size(); ++x) {
    if (povms_[x].size() != povms_[0].size())
      fail(ErrorKind::Validation, "measurement assemblage: settings with different outcome counts");
    if (povms_[x].dim() != povms_[0].dim())
      fail(ErrorKind::Dimension, "measurement assemblage: settings of different dimension");
  }
}

Assemblage::Assemblage(std::vector<std::vector<HermitianOperator>> members,
                       const AssemblageTolerances& tol)
    : members_(std::move(members)) {
  if (members_.empty() || members_.front().empty())
    fail(ErrorKind::Validation, "assemblage: no members");
  const std::size_t outcomes = members_.front().size();
  const std::size_t d = members_.front().front().dim();
  for (std::size_t x = 0; x < members_.size(); ++x) {
    if (members_[x].size() != outcomes)
      fail(ErrorKind::Validation, "assemblage: settings with different outcome counts");
    HermitianOperator sum = HermitianOperator::zero(d);
    for (std::size_t a = 0; a < outcomes; ++a) {
      const auto& m = members_[x][a];
      if (m.dim() != d) fail(ErrorKind::Dimension, "assemblage: member " + label(a, x) + " has wrong dimension");
      const double lo = min_eigenvalue(m);
      if (lo < -tol.psd) {
        std::ostringstream os;
        os << "assemblage: member " << label(a, x) << " not positive semidefinite (min eigenvalue "
           << lo << ")";
        fail(ErrorKind::Validation, os.str());
      }
      sum += m;
    }
    if (x == 0) {
      reduced_ = sum;
    } else {
      const double dev = max_abs(sum.matrix() - reduced_.matrix());
      if (dev > tol.consistency) {
        std::ostringstream os;
        os << "assemblage: setting x=" << x + 1 << " sums to a different reduced state (deviation "
           << dev << ")";
        fail(ErrorKind::Validation, os.str());
      }
    }
  }
  if (std::abs(reduced_.trace() - 1.0) > tol.trace) {
    std::ostringstream os;
    os << "assemblage: reduced state has trace " << reduced_.trace();
    fail(ErrorKind::Validation, os.str());
  }
}

Assemblage Assemblage::without_setting(std::size_t x) const {
  if (x >= settings() || settings() < 2)
    fail(ErrorKind::Validation, "assemblage: cannot remove setting");
  auto copy = members_;
  copy.erase(copy.begin() + static_cast<std::ptrdiff_t>(x));
  return Assemblage(std::move(copy));
}

DeterministicStrategy::DeterministicStrategy(std::vector<std::size_t> assignment,
                                             std::size_t outcomes)
    : assignment_(std::move(assignment)), outcomes_(outcomes) {
  if (assignment_.empty()) fail(ErrorKind::Validation, "strategy: no settings");
  for (std::size_t x = 0; x < assignment_.size(); ++x) {
    if (assignment_[x] >= outcomes_) {
      std::ostringstream os;
      os << "strategy: setting " << x + 1 << " assigned outcome " << assignment_[x] + 1
         << " outside 1.." << outcomes_;
      fail(ErrorKind::Validation, os.str());
    }
  }
}

std::size_t strategy_count(std::size_t outcomes, std::size_t settings, std::size_t cap) {
  std::size_t n = 1;
  for (std::size_t x = 0; x < settings; ++x) {
    if (outcomes != 0 && n > cap / outcomes) return cap + 1;
    n *= outcomes;
  }
  return n;
}

std::vector<DeterministicStrategy> enumerate_strategies(std::size_t outcomes,
                                                        std::size_t settings,
                                                        std::size_t cap) {
  if (outcomes == 0 || settings == 0)
    fail(ErrorKind::Validation, "strategies: need at least one outcome and one setting");
  const std::size_t count = strategy_count(outcomes, settings, cap);
  if (count > cap) {
    std::ostringstream os;
    os << "strategies: " << outcomes << "^" << settings << " deterministic strategies exceed cap "
       << cap;
    fail(ErrorKind::Size, os.str());
  }
  std::vector<DeterministicStrategy> out;
  out.reserve(count);
  std::vector<std::size_t> f(settings, 0);
  for (std::size_t n = 0; n < count; ++n) {
    out.emplace_back(f, outcomes);
    // Odometer increment, last setting fastest.
    for (std::size_t x = settings; x-- > 0;) {
      if (++f[x] < outcomes) break;
      f[x] = 0;
    }
  }
  return out;
}

Assemblage assemblage_from_state(const BipartiteState& rho, const MeasurementAssemblage& ma) {
  if (ma.dim() != rho.dim_a()) {
    std::ostringstream os;
    os << "assemblage from state: measurement dimension " << ma.dim() << " != dim_A "
       << rho.dim_a();
    fail(ErrorKind::Dimension, os.str());
  }
  const auto id_b = HermitianOperator::identity(rho.dim_b());
  std::vector<std::vector<HermitianOperator>> members(ma.settings());
  for (std::size_t x = 0; x < ma.settings(); ++x) {
    for (std::size_t a = 0; a < ma.outcomes(); ++a) {
      const ComplexMatrix lifted = kron(ma.element(a, x).matrix(), id_b.matrix());
      // (M (x) 1) rho is not Hermitian, but its partial trace over A is.
      const ComplexMatrix prod = lifted * rho.op().matrix();
      const auto db = static_cast<Eigen::Index>(rho.dim_b());
      ComplexMatrix out = ComplexMatrix::Zero(db, db);
      for (std::size_t i = 0; i < rho.dim_a(); ++i) {
        const auto off = static_cast<Eigen::Index>(i) * db;
        out += prod.block(off, off, db, db);
      }
      members[x].push_back(symmetrize(out));
    }
  }
  return Assemblage(std::move(members));
}

Assemblage unsteerable_assemblage(std::span<const double> weights,
                                  std::span<const DeterministicStrategy> strategies,
                                  std::span<const QuantumState> states) {
  if (weights.empty() || weights.size() != strategies.size() || weights.size() != states.size())
    fail(ErrorKind::Validation, "LHS model: weights, strategies and states must have equal length");
  double total = 0.0;
  for (double w : weights) {
    if (w < 0) fail(ErrorKind::Validation, "LHS model: negative weight");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-10) {
    std::ostringstream os;
    os << "LHS model: weights sum to " << total << ", not 1";
    fail(ErrorKind::Validation, os.str());
  }
  const std::size_t settings = strategies.front().settings();
  const std::size_t outcomes = strategies.front().outcomes();
  const std::size_t d = states.front().dim();
  std::vector<std::vector<HermitianOperator>> members(
      settings, std::vector<HermitianOperator>(outcomes, HermitianOperator::zero(d)));
  for (std::size_t l = 0; l < weights.size(); ++l) {
    if (strategies[l].settings() != settings || strategies[l].outcomes() != outcomes)
      fail(ErrorKind::Validation, "LHS model: strategies of different shape");
    if (states[l].dim() != d) fail(ErrorKind::Dimension, "LHS model: states of different dimension");
    for (std::size_t x = 0; x < settings; ++x)
      members[x][strategies[l].outcome(x)] += weights[l] * states[l].op();
  }
  return Assemblage(std::move(members));
}

Subchannel::Subchannel(std::size_t input_dim, std::size_t output_dim,
                       std::vector<ComplexMatrix> kraus)
    : input_dim_(input_dim), output_dim_(output_dim), kraus_(std::move(kraus)) {
  for (const auto& k : kraus_) {
    if (static_cast<std::size_t>(k.cols()) != input_dim_ ||
        static_cast<std::size_t>(k.rows()) != output_dim_)
      fail(ErrorKind::Dimension, "subchannel: Kraus operator has wrong shape");
    require_finite(k, "subchannel Kraus operator");
  }
  const double top = max_eigenvalue(effect());
  if (top > 1.0 + kTraceTol) {
    std::ostringstream os;
    os << "subchannel: trace increasing (largest eigenvalue of sum K^dag K is " << top << ")";
    fail(ErrorKind::Validation, os.str());
  }
}

HermitianOperator Subchannel::apply(const HermitianOperator& rho) const {
  if (rho.dim() != input_dim_) fail(ErrorKind::Dimension, "subchannel: input dimension mismatch");
  ComplexMatrix out = ComplexMatrix::Zero(output_dim_, output_dim_);
  for (const auto& k : kraus_) out += k * rho.matrix() * k.adjoint();
  return symmetrize(out);
}

HermitianOperator Subchannel::apply_dual(const HermitianOperator& y) const {
  if (y.dim() != output_dim_) fail(ErrorKind::Dimension, "subchannel dual: dimension mismatch");
  ComplexMatrix out = ComplexMatrix::Zero(input_dim_, input_dim_);
  for (const auto& k : kraus_) out += k.adjoint() * y.matrix() * k;
  return symmetrize(out);
}

HermitianOperator Subchannel::effect() const {
  return apply_dual(HermitianOperator::identity(output_dim_));
}

HermitianOperator apply_subchannel(const Subchannel& s, const HermitianOperator& rho) {
  return s.apply(rho);
}

Instrument::Instrument(std::vector<Subchannel> branches) : branches_(std::move(branches)) {
  if (branches_.empty()) fail(ErrorKind::Validation, "instrument: no branches");
  HermitianOperator total = HermitianOperator::zero(input_dim());
  for (const auto& b : branches_) {
    if (b.input_dim() != input_dim() || b.output_dim() != output_dim())
      fail(ErrorKind::Dimension, "instrument: branches with different dimensions");
    total += b.effect();
  }
  const double dev = max_abs(total.matrix() - ComplexMatrix::Identity(input_dim(), input_dim()));
  if (dev > kTraceTol) {
    std::ostringstream os;
    os << "instrument: total map is not trace preserving (deviation " << dev << ")";
    fail(ErrorKind::Validation, os.str());
  }
}

HermitianOperator Instrument::apply_total(const HermitianOperator& rho) const {
  HermitianOperator out = HermitianOperator::zero(output_dim());
  for (const auto& b : branches_) out += b.apply(rho);
  return out;
}

Instrument amplitude_damping_instrument(double gamma) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) {
    std::ostringstream os;
    os << "amplitude damping: gamma " << gamma << " outside [0, 1]";
    fail(ErrorKind::Validation, os.str());
  }
  ComplexMatrix k0 = ComplexMatrix::Zero(2, 2);
  k0(0, 0) = 1.0;
  k0(1, 1) = std::sqrt(1.0 - gamma);
  ComplexMatrix k1 = ComplexMatrix::Zero(2, 2);
  k1(0, 1) = std::sqrt(gamma);
  return Instrument({Subchannel(2, 2, {k0}), Subchannel(2, 2, {k1})});
}

}  // namespace steer
