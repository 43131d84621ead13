#pragma once

// Steering robustness of assemblages and (lower bounds on) states.
//
// R(A) + 1 is computed twice, by two independently formulated SDPs:
//
//   primal:  minimize sum_l Tr(sigma_l)
//            s.t. sum_l D(a|x,l) sigma_l >= rho_{a|x},  sigma_l >= 0
//
//   dual:    maximize sum_{a,x} Tr(F_{a|x} rho_{a|x})
//            s.t. sum_{a,x} D(a|x,l) F_{a|x} <= 1 for every strategy l,  F >= 0
//
// where l runs over all |A|^|X| deterministic strategies.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "steer/quantum.hpp"
#include "steer/sdp.hpp"

namespace steer {

/// Operators indexed [x][a], e.g. a steering witness F_{a|x}.
using OperatorGrid = std::vector<std::vector<HermitianOperator>>;

struct RobustnessOptions {
  sdp::SolveOptions solver;
  std::size_t strategy_cap = kDefaultStrategyCap;
};

struct PrimalResult {
  double value = 0.0;  // R + 1
  std::vector<DeterministicStrategy> strategies;
  std::vector<HermitianOperator> lhs_model;  // sigma_l, aligned with strategies
  OperatorGrid slack;                        // sum_l D sigma_l - rho_{a|x}
  sdp::SolveStatus status = sdp::SolveStatus::Optimal;
  sdp::Residuals residuals;
  int iterations = 0;
};

struct DualResult {
  double value = 0.0;         // objective of the certified witness
  double solver_value = 0.0;  // objective reported by the SDP solver
  OperatorGrid witness;       // F_{a|x}, exactly PSD and feasible
  sdp::SolveStatus status = sdp::SolveStatus::Optimal;
  sdp::Residuals residuals;
  int iterations = 0;
};

PrimalResult robustness_primal(const Assemblage& assemblage, const RobustnessOptions& options = {});

/// The raw solver witness is projected onto the PSD cone and divided by
/// max(1, max_l lambda_max(sum D F)), so the returned witness is exactly
/// feasible and `value` is a certified lower bound on R + 1.
DualResult robustness_dual(const Assemblage& assemblage, const RobustnessOptions& options = {});

struct SteeringReport {
  std::size_t settings = 0;
  std::size_t outcomes = 0;
  double robustness = 0.0;  // primal_value - 1
  double primal_value = 0.0;
  double dual_value = 0.0;
  double saturation_gap = 0.0;
  OperatorGrid witness;
  std::vector<DeterministicStrategy> strategies;
  std::vector<HermitianOperator> lhs_model;
  std::optional<Assemblage> noise_assemblage;  // tau_{a|x}, present iff R > 1e-6
  sdp::SolveStatus primal_status = sdp::SolveStatus::Optimal;
  sdp::SolveStatus dual_status = sdp::SolveStatus::Optimal;
  sdp::Residuals primal_residuals;
  sdp::Residuals dual_residuals;

  bool optimal() const noexcept {
    return primal_status == sdp::SolveStatus::Optimal && dual_status == sdp::SolveStatus::Optimal;
  }
};

/// Solves both formulations. A single-setting assemblage short-circuits to
/// R = 0 with sigma_a = rho_{a|1} and F_{a|1} = 1.
SteeringReport steering_robustness(const Assemblage& assemblage,
                                   const RobustnessOptions& options = {});

/// 1 - max_l lambda_max(sum_{a,x} D(a|x,l) F_{a|x}) over all strategies.
double saturation_gap(const OperatorGrid& witness, std::size_t strategy_cap = kDefaultStrategyCap);
double check_saturation(const SteeringReport& report);

/// sum_{a,x} Tr(F_{a|x} rho_{a|x})
double witness_value(const OperatorGrid& witness, const Assemblage& assemblage);

/// max over strategies of lambda_max(sum D F) - 1 and over (a,x) of -lambda_min(F);
/// <= 0 means feasible.
double witness_violation(const OperatorGrid& witness, std::size_t strategy_cap = kDefaultStrategyCap);

/// max over (a,x) of -lambda_min(sum_l D(a|x,l) sigma_l - rho_{a|x}); <= 0 means feasible.
double lhs_violation(const std::vector<DeterministicStrategy>& strategies,
                     const std::vector<HermitianOperator>& lhs_model, const Assemblage& assemblage);

// ---------------------------------------------------------------------------
// State level

struct NamedMeasurements {
  std::string name;
  MeasurementAssemblage measurements;
};

struct CandidateResult {
  std::string name;
  MeasurementAssemblage measurements;
  std::optional<SteeringReport> report;
  std::string error;  // set when the candidate failed
};

/// Certified lower bound max_candidates R(A) on the state's steering
/// robustness (a supremum over all measurement assemblages).
struct StateSteeringReport {
  double lower_bound = 0.0;
  std::size_t best_index = 0;
  std::vector<CandidateResult> candidates;
  /// Generalized entanglement robustness, known in closed form for pure states.
  std::optional<double> upper_bound;
  bool partial = false;  // some candidates failed

  const CandidateResult& best() const { return candidates.at(best_index); }
};

StateSteeringReport state_steering_lower_bound(const BipartiteState& state,
                                               std::span<const NamedMeasurements> candidates,
                                               const RobustnessOptions& options = {});

struct SeesawResult {
  MeasurementAssemblage measurements;
  double robustness = 0.0;
  std::vector<double> history;  // R after each accepted round, starting value first
};

/// Alternates the witness SDP for fixed measurements with a POVM SDP for the
/// fixed witness. The best measurements seen are returned, so the result is
/// never worse than the start.
SeesawResult seesaw_improve(const BipartiteState& state, const MeasurementAssemblage& start,
                            int rounds, const RobustnessOptions& options = {});

/// One POVM-optimization step: argmax over POVMs of sum_{a,x} Tr(F_{a|x} rho_{a|x}).
MeasurementAssemblage optimize_measurements(const BipartiteState& state, const OperatorGrid& witness,
                                            const RobustnessOptions& options = {});

/// (sum_i sqrt(p_i))^2 - 1
double pure_state_generalized_robustness(std::span<const double> schmidt_probabilities);

/// Schmidt probabilities of a pure bipartite state (eigenvalues of the B marginal).
std::vector<double> schmidt_probabilities(const BipartiteState& state);

struct ChainCheck {
  bool ok = false;
  double max_assemblage_robustness = 0.0;
  double lower_bound = 0.0;
  double generalized_robustness = 0.0;
  std::string detail;
};

/// R(A) <= lower bound <= R_g = (sum sqrt p)^2 - 1, each with 1e-6 slack.
ChainCheck chain_check(const StateSteeringReport& report, std::span<const double> schmidt_probabilities);

}  // namespace steer
