#include "steer/robustness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "steer/error.hpp"

namespace steer {
namespace {

constexpr double kNoiseThreshold = 1e-6;

void require_multi_outcome(const Assemblage& a) {
  if (a.outcomes() == 0 || a.settings() == 0)
    fail(ErrorKind::Validation, "assemblage has no members");
}

std::size_t slack_block(std::size_t strategies, std::size_t outcomes, std::size_t x,
                        std::size_t a) {
  return strategies + x * outcomes + a;
}

// sum_{a,x} D(a|x,l) F_{a|x}
HermitianOperator strategy_sum(const OperatorGrid& f, const DeterministicStrategy& s) {
  HermitianOperator sum = HermitianOperator::zero(f.front().front().dim());
  for (std::size_t x = 0; x < f.size(); ++x) sum += f[x][s.outcome(x)];
  return sum;
}

double max_strategy_eigenvalue(const OperatorGrid& f, std::size_t cap) {
  const auto strategies = enumerate_strategies(f.front().size(), f.size(), cap);
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& s : strategies) worst = std::max(worst, max_eigenvalue(strategy_sum(f, s)));
  return worst;
}

OperatorGrid trivial_witness(const Assemblage& a) {
  return OperatorGrid(a.settings(),
                      std::vector<HermitianOperator>(a.outcomes(), HermitianOperator::identity(a.dim())));
}

// tau_{a|x} = (sum_l D sigma_l - rho_{a|x}) / R. Consistency across x and the
// unit trace are exact by construction; the PSD tolerance absorbs the solver's
// residual infeasibility, amplified by 1/R.
std::optional<Assemblage> noise_assemblage(const PrimalResult& p, const Assemblage& a, double r) {
  if (r <= kNoiseThreshold) return std::nullopt;
  OperatorGrid tau(a.settings());
  for (std::size_t x = 0; x < a.settings(); ++x) {
    for (std::size_t o = 0; o < a.outcomes(); ++o) {
      HermitianOperator t = HermitianOperator::zero(a.dim());
      for (std::size_t l = 0; l < p.strategies.size(); ++l)
        if (p.strategies[l].responds(o, x)) t += p.lhs_model[l];
      t -= a.member(o, x);
      tau[x].push_back((1.0 / r) * t);
    }
  }
  AssemblageTolerances tol;
  tol.psd = std::max(tol.psd, 1e-8 / r);
  tol.consistency = std::max(tol.consistency, 1e-8 / r);
  tol.trace = std::max(tol.trace, 1e-8 / r);
  try {
    return Assemblage(std::move(tau), tol);
  } catch (const Error&) {
    return std::nullopt;
  }
}

}  // namespace

PrimalResult robustness_primal(const Assemblage& assemblage, const RobustnessOptions& options) {
  require_multi_outcome(assemblage);
  const std::size_t na = assemblage.outcomes();
  const std::size_t nx = assemblage.settings();
  const std::size_t d = assemblage.dim();

  PrimalResult out;
  out.strategies = enumerate_strategies(na, nx, options.strategy_cap);
  const std::size_t nl = out.strategies.size();

  sdp::HermitianSdpProblem p;
  p.block_dims.assign(nl + na * nx, d);
  p.objective.assign(nl, HermitianOperator::identity(d));
  p.objective.resize(nl + na * nx, HermitianOperator::zero(d));

  const auto basis = sdp::hermitian_basis(d);
  for (std::size_t x = 0; x < nx; ++x) {
    for (std::size_t a = 0; a < na; ++a) {
      for (const auto& e : basis) {
        sdp::HermitianConstraint c;
        for (std::size_t l = 0; l < nl; ++l)
          if (out.strategies[l].responds(a, x)) c.terms.push_back({l, e});
        c.terms.push_back({slack_block(nl, na, x, a), -1.0 * e});
        c.rhs = hs_inner(e, assemblage.member(a, x));
        p.constraints.push_back(std::move(c));
      }
    }
  }

  const auto s = sdp::solve(p, options.solver);
  out.status = s.status;
  out.residuals = s.residuals;
  out.iterations = s.iterations;
  out.value = 0.0;
  for (std::size_t l = 0; l < nl; ++l) {
    out.lhs_model.push_back(s.X[l]);
    out.value += s.X[l].trace();
  }
  out.slack.resize(nx);
  for (std::size_t x = 0; x < nx; ++x)
    for (std::size_t a = 0; a < na; ++a) out.slack[x].push_back(s.X[slack_block(nl, na, x, a)]);
  return out;
}

DualResult robustness_dual(const Assemblage& assemblage, const RobustnessOptions& options) {
  require_multi_outcome(assemblage);
  const std::size_t na = assemblage.outcomes();
  const std::size_t nx = assemblage.settings();
  const std::size_t d = assemblage.dim();
  const auto strategies = enumerate_strategies(na, nx, options.strategy_cap);
  const std::size_t nl = strategies.size();
  const std::size_t nf = na * nx;

  // Blocks: F_{a|x} at x*na + a, then one slack W_l per strategy.
  sdp::HermitianSdpProblem p;
  p.block_dims.assign(nf + nl, d);
  for (std::size_t x = 0; x < nx; ++x)
    for (std::size_t a = 0; a < na; ++a) p.objective.push_back(-1.0 * assemblage.member(a, x));
  p.objective.resize(nf + nl, HermitianOperator::zero(d));

  const auto basis = sdp::hermitian_basis(d);
  const auto id = HermitianOperator::identity(d);
  for (std::size_t l = 0; l < nl; ++l) {
    for (const auto& e : basis) {
      sdp::HermitianConstraint c;
      for (std::size_t x = 0; x < nx; ++x) c.terms.push_back({x * na + strategies[l].outcome(x), e});
      c.terms.push_back({nf + l, e});
      c.rhs = hs_inner(e, id);
      p.constraints.push_back(std::move(c));
    }
  }

  const auto s = sdp::solve(p, options.solver);
  DualResult out;
  out.status = s.status;
  out.residuals = s.residuals;
  out.iterations = s.iterations;
  out.solver_value = -s.primal_value;

  out.witness.resize(nx);
  for (std::size_t x = 0; x < nx; ++x)
    for (std::size_t a = 0; a < na; ++a) out.witness[x].push_back(psd_part(s.X[x * na + a]));
  double scale = 0.0;
  for (const auto& st : strategies) scale = std::max(scale, max_eigenvalue(strategy_sum(out.witness, st)));
  if (scale > 1.0)
    for (auto& row : out.witness)
      for (auto& f : row) f *= 1.0 / scale;
  out.value = witness_value(out.witness, assemblage);
  return out;
}

SteeringReport steering_robustness(const Assemblage& assemblage, const RobustnessOptions& options) {
  require_multi_outcome(assemblage);
  SteeringReport r;
  r.settings = assemblage.settings();
  r.outcomes = assemblage.outcomes();

  if (assemblage.settings() == 1) {
    for (std::size_t a = 0; a < assemblage.outcomes(); ++a) {
      r.strategies.emplace_back(std::vector<std::size_t>{a}, assemblage.outcomes());
      r.lhs_model.push_back(assemblage.member(a, 0));
    }
    r.witness = trivial_witness(assemblage);
    r.primal_value = 1.0;
    r.dual_value = witness_value(r.witness, assemblage);
    r.robustness = 0.0;
    r.saturation_gap = 0.0;
    return r;
  }

  PrimalResult primal = robustness_primal(assemblage, options);
  DualResult dual = robustness_dual(assemblage, options);
  r.primal_value = primal.value;
  r.dual_value = dual.value;
  r.robustness = primal.value - 1.0;
  r.primal_status = primal.status;
  r.dual_status = dual.status;
  r.primal_residuals = primal.residuals;
  r.dual_residuals = dual.residuals;
  r.noise_assemblage = noise_assemblage(primal, assemblage, r.robustness);
  r.strategies = std::move(primal.strategies);
  r.lhs_model = std::move(primal.lhs_model);
  r.witness = std::move(dual.witness);
  r.saturation_gap = saturation_gap(r.witness, options.strategy_cap);
  return r;
}

double saturation_gap(const OperatorGrid& witness, std::size_t strategy_cap) {
  if (witness.empty() || witness.front().empty())
    fail(ErrorKind::Validation, "saturation gap: empty witness");
  return 1.0 - max_strategy_eigenvalue(witness, strategy_cap);
}

double check_saturation(const SteeringReport& report) {
  return saturation_gap(report.witness);
}

double witness_value(const OperatorGrid& witness, const Assemblage& assemblage) {
  if (witness.size() != assemblage.settings())
    fail(ErrorKind::Dimension, "witness and assemblage differ in setting count");
  double v = 0.0;
  for (std::size_t x = 0; x < witness.size(); ++x) {
    if (witness[x].size() != assemblage.outcomes())
      fail(ErrorKind::Dimension, "witness and assemblage differ in outcome count");
    for (std::size_t a = 0; a < witness[x].size(); ++a) v += hs_inner(witness[x][a], assemblage.member(a, x));
  }
  return v;
}

double witness_violation(const OperatorGrid& witness, std::size_t strategy_cap) {
  double v = max_strategy_eigenvalue(witness, strategy_cap) - 1.0;
  for (const auto& row : witness)
    for (const auto& f : row) v = std::max(v, -min_eigenvalue(f));
  return v;
}

double lhs_violation(const std::vector<DeterministicStrategy>& strategies,
                     const std::vector<HermitianOperator>& lhs_model, const Assemblage& assemblage) {
  if (strategies.size() != lhs_model.size())
    fail(ErrorKind::Dimension, "LHS model and strategy list differ in length");
  double v = -std::numeric_limits<double>::infinity();
  for (const auto& s : lhs_model) v = std::max(v, -min_eigenvalue(s));
  for (std::size_t x = 0; x < assemblage.settings(); ++x) {
    for (std::size_t a = 0; a < assemblage.outcomes(); ++a) {
      HermitianOperator t = HermitianOperator::zero(assemblage.dim());
      for (std::size_t l = 0; l < strategies.size(); ++l)
        if (strategies[l].responds(a, x)) t += lhs_model[l];
      v = std::max(v, -min_eigenvalue(t - assemblage.member(a, x)));
    }
  }
  return v;
}

// ---------------------------------------------------------------------------

std::vector<double> schmidt_probabilities(const BipartiteState& state) {
  const RealVector ev = eigenvalues(state.reduced_b());
  std::vector<double> p;
  for (Eigen::Index i = ev.size(); i-- > 0;) p.push_back(std::max(0.0, ev(i)));
  return p;
}

StateSteeringReport state_steering_lower_bound(const BipartiteState& state,
                                               std::span<const NamedMeasurements> candidates,
                                               const RobustnessOptions& options) {
  if (candidates.empty()) fail(ErrorKind::Validation, "state lower bound: no candidate measurements");
  StateSteeringReport out;
  bool have_best = false;
  for (const auto& c : candidates) {
    CandidateResult cr{c.name, c.measurements, std::nullopt, {}};
    try {
      if (c.measurements.dim() != state.dim_a())
        fail(ErrorKind::Dimension, "candidate '" + c.name + "' acts on dimension " +
                                       std::to_string(c.measurements.dim()) + ", state has dA = " +
                                       std::to_string(state.dim_a()));
      cr.report = steering_robustness(assemblage_from_state(state, c.measurements), options);
      if (!cr.report->optimal()) out.partial = true;
      if (!have_best || cr.report->robustness > out.lower_bound) {
        out.lower_bound = cr.report->robustness;
        out.best_index = out.candidates.size();
        have_best = true;
      }
    } catch (const Error& e) {
      cr.error = e.what();
      out.partial = true;
    }
    out.candidates.push_back(std::move(cr));
  }
  if (!have_best) fail(ErrorKind::Validation, "state lower bound: every candidate failed: " + out.candidates.front().error);
  if (state.state().purity() >= 1.0 - 1e-9) {
    const auto p = schmidt_probabilities(state);
    double sum = 0.0;
    for (double v : p) sum += v;
    std::vector<double> normalized;
    for (double v : p) normalized.push_back(v / sum);
    out.upper_bound = pure_state_generalized_robustness(normalized);
  }
  return out;
}

MeasurementAssemblage optimize_measurements(const BipartiteState& state, const OperatorGrid& witness,
                                            const RobustnessOptions& options) {
  const std::size_t da = state.dim_a();
  const std::size_t db = state.dim_b();
  const auto id_a = HermitianOperator::identity(da);
  const auto basis = sdp::hermitian_basis(da);
  std::vector<Povm> povms;
  for (const auto& row : witness) {
    const std::size_t na = row.size();
    // G_a = Tr_B((1 (x) F_a) rho), so Tr(F_a rho_a) = Tr(M_a G_a).
    std::vector<HermitianOperator> g;
    for (const auto& f : row) {
      if (f.dim() != db) fail(ErrorKind::Dimension, "witness dimension does not match dB");
      const ComplexMatrix prod = kron(id_a.matrix(), f.matrix()) * state.op().matrix();
      g.push_back(partial_trace(symmetrize(prod), da, db, Subsystem::A));
    }
    sdp::HermitianSdpProblem p;
    p.block_dims.assign(na, da);
    for (const auto& ga : g) p.objective.push_back(-1.0 * ga);
    for (const auto& e : basis) {
      sdp::HermitianConstraint c;
      for (std::size_t a = 0; a < na; ++a) c.terms.push_back({a, e});
      c.rhs = hs_inner(e, id_a);
      p.constraints.push_back(std::move(c));
    }
    const auto s = sdp::solve(p, options.solver);
    if (s.status == sdp::SolveStatus::NumericalFailure)
      fail(ErrorKind::Convergence, "measurement optimization failed");
    // Clip and renormalize so the result is an exact POVM.
    std::vector<HermitianOperator> m;
    HermitianOperator sum = HermitianOperator::zero(da);
    for (const auto& xa : s.X) {
      m.push_back(psd_part(xa));
      sum += m.back();
    }
    const auto inv_sqrt = spectral_map(sum, [](double v) { return 1.0 / std::sqrt(v); });
    for (auto& ma : m) ma = congruence(inv_sqrt.matrix(), ma);
    povms.emplace_back(std::move(m));
  }
  return MeasurementAssemblage(std::move(povms));
}

SeesawResult seesaw_improve(const BipartiteState& state, const MeasurementAssemblage& start, int rounds,
                            const RobustnessOptions& options) {
  if (rounds < 1) fail(ErrorKind::Validation, "see-saw needs at least one round");
  SteeringReport current = steering_robustness(assemblage_from_state(state, start), options);
  SeesawResult best{start, current.robustness, {current.robustness}};
  for (int r = 0; r < rounds; ++r) {
    try {
      MeasurementAssemblage next = optimize_measurements(state, current.witness, options);
      SteeringReport report = steering_robustness(assemblage_from_state(state, next), options);
      if (!report.optimal()) break;
      best.history.push_back(report.robustness);
      if (report.robustness > best.robustness) {
        best.robustness = report.robustness;
        best.measurements = next;
      }
      current = std::move(report);
    } catch (const Error&) {
      break;
    }
  }
  return best;
}

double pure_state_generalized_robustness(std::span<const double> p) {
  if (p.empty()) fail(ErrorKind::Validation, "Schmidt probabilities: empty list");
  double total = 0.0;
  double root_sum = 0.0;
  for (double v : p) {
    if (!std::isfinite(v) || v < 0.0) fail(ErrorKind::Validation, "Schmidt probabilities must be >= 0");
    total += v;
    root_sum += std::sqrt(v);
  }
  if (std::abs(total - 1.0) > 1e-9)
    fail(ErrorKind::Validation, "Schmidt probabilities sum to " + format_number(total) + ", not 1");
  return root_sum * root_sum - 1.0;
}

ChainCheck chain_check(const StateSteeringReport& report, std::span<const double> p) {
  constexpr double slack = 1e-6;
  ChainCheck c;
  c.lower_bound = report.lower_bound;
  c.generalized_robustness = pure_state_generalized_robustness(p);
  c.max_assemblage_robustness = -std::numeric_limits<double>::infinity();
  c.ok = true;
  for (const auto& cand : report.candidates) {
    if (!cand.report) continue;
    const double r = cand.report->robustness;
    c.max_assemblage_robustness = std::max(c.max_assemblage_robustness, r);
    if (r > c.lower_bound + slack) {
      c.ok = false;
      c.detail += "candidate '" + cand.name + "' has R = " + format_number(r) +
                  " above the lower bound; ";
    }
    if (r < -slack) {
      c.ok = false;
      c.detail += "candidate '" + cand.name + "' has negative R; ";
    }
  }
  if (c.lower_bound > c.generalized_robustness + slack) {
    c.ok = false;
    c.detail += "lower bound " + format_number(c.lower_bound) + " exceeds R_g = " +
                format_number(c.generalized_robustness);
  }
  return c;
}

}  // namespace steer
