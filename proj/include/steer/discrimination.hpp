#pragma once

// Subchannel discrimination with an entangled ancilla and one-way forward
// communication, and the instrument built from a steering witness that makes
// the entangled strategy beat every unentangled one by the factor 1 + R.
//
// Constructed instrument (output space span{|x>} (+) a 2-dim sector):
//   Lambda_a[rho]       = alpha sum_x Tr(F_{a|x} rho) |x><x|           a < |A|
//   Lambda_{|A|+k}[rho] = Tr(G rho) / N  sigma_k,  G = 1 - alpha sum F  k < N
// with alpha = 1 / ||sum_{a,x} F_{a|x}|| and sigma_k pure states in the sector.

#include <cstdint>
#include <vector>

#include "steer/quantum.hpp"
#include "steer/robustness.hpp"

namespace steer {

struct ConstructedInstrument {
  OperatorGrid witness;
  double alpha = 0.0;
  std::size_t padding = 1;
  std::uint64_t seed = 0;
  /// Pad states as unit vectors in the output space, zero on span{|x>}.
  std::vector<ComplexVector> pad_states;
  HermitianOperator leftover;  // G
  Instrument instrument;

  std::size_t settings() const noexcept { return witness.size(); }
  std::size_t outcomes() const noexcept { return witness.front().size(); }
  std::size_t input_dim() const noexcept { return instrument.input_dim(); }
  std::size_t output_dim() const noexcept { return instrument.output_dim(); }
};

/// Throws ErrorKind::Validation for a witness with sum F = 0 or a negative
/// eigenvalue below -1e-8, and for padding = 0.
ConstructedInstrument build_instrument(const OperatorGrid& witness, std::size_t padding,
                                       std::uint64_t seed);
ConstructedInstrument build_instrument(const SteeringReport& report, std::size_t padding,
                                       std::uint64_t seed);

struct AncillaElement {
  std::size_t branch = 0;
  HermitianOperator op;
};

/// Probe POVM {N_y} on the instrument output; after outcome y the ancilla is
/// measured with a POVM whose outcomes name branches. Ancilla POVMs are stored
/// sparsely: branches not listed for y have the zero element.
class OneWayStrategy {
 public:
  static constexpr double kTol = 1e-9;

  OneWayStrategy(Povm probe, std::vector<std::vector<AncillaElement>> ancilla,
                 std::size_t branches);

  /// Dense form: one ancilla POVM with `branches` elements per probe outcome.
  static OneWayStrategy dense(Povm probe, const std::vector<Povm>& ancilla);

  const Povm& probe() const noexcept { return probe_; }
  const std::vector<AncillaElement>& ancilla(std::size_t y) const { return ancilla_.at(y); }
  std::size_t probe_outcomes() const noexcept { return probe_.size(); }
  std::size_t branches() const noexcept { return branches_; }
  std::size_t ancilla_dim() const noexcept { return ancilla_dim_; }

 private:
  Povm probe_;
  std::vector<std::vector<AncillaElement>> ancilla_;
  std::size_t branches_;
  std::size_t ancilla_dim_;
};

/// Probe: {|x><x|} followed by the pretty-good measurement for the pad states
/// on the sector. Ancilla: the generating measurement M_{a|x} after probe
/// outcome x, and the pad branch k after pad outcome k.
OneWayStrategy canonical_strategy(const ConstructedInstrument& inst,
                                  const MeasurementAssemblage& measurements);

/// sum_y sum_a Tr((M_{a|y} (x) Lambda_a^dag[N_y]) rho_AB), the instrument acting on B.
double pcorr_oneway(const Instrument& inst, const OneWayStrategy& strategy,
                    const BipartiteState& state);

/// sum_a Tr(Q_a (id (x) Lambda_a)[rho_AB]) with Q_a = sum_y M_{a|y} (x) N_y.
double pcorr_oneway_global(const Instrument& inst, const OneWayStrategy& strategy,
                           const BipartiteState& state);

struct NeBracket {
  double low = 0.0;
  double high = 0.0;
};

/// low = alpha max_f lambda_max(sum_x F_{f(x)|x}), high = low + 2/N.
NeBracket pcorr_ne_bracket(const ConstructedInstrument& inst,
                           std::size_t strategy_cap = kDefaultStrategyCap);

struct DiscriminationResult {
  double p_oneway = 0.0;
  double p_ne_low = 0.0;
  double p_ne_high = 0.0;
  double ratio_low = 0.0;
  double ratio_high = 0.0;
  double robustness = 0.0;
  double alpha = 0.0;
  std::size_t padding = 1;
  std::uint64_t seed = 0;
  SteeringReport report;
};

/// Throws ErrorKind::NoAdvantage when the induced assemblage has R <= 1e-6.
DiscriminationResult advantage_ratio(const BipartiteState& state,
                                    const MeasurementAssemblage& measurements,
                                    std::size_t padding, std::uint64_t seed,
                                    const RobustnessOptions& options = {});

}  // namespace steer
