#pragma once

// States, measurements, assemblages, deterministic strategies and
// Kraus-represented subchannels.
//
// Setting/outcome indices are 0-based in this API; JSON files and error
// messages use 1-based labels.

#include <cstddef>
#include <span>
#include <vector>

#include "steer/linalg.hpp"

namespace steer {

inline constexpr std::size_t kDefaultStrategyCap = 1'000'000;

/// Normalized density operator: PSD at 1e-10 and unit trace to 1e-10.
class QuantumState {
 public:
  static constexpr double kTol = 1e-10;

  explicit QuantumState(HermitianOperator op);

  const HermitianOperator& op() const noexcept { return op_; }
  std::size_t dim() const noexcept { return op_.dim(); }
  /// Tr(rho^2)
  double purity() const;

 private:
  HermitianOperator op_;
};

/// A state on A (x) B, A first in the Kronecker ordering.
class BipartiteState {
 public:
  BipartiteState(QuantumState state, std::size_t dim_a, std::size_t dim_b);

  const QuantumState& state() const noexcept { return state_; }
  const HermitianOperator& op() const noexcept { return state_.op(); }
  std::size_t dim_a() const noexcept { return dim_a_; }
  std::size_t dim_b() const noexcept { return dim_b_; }

  HermitianOperator reduced_a() const;
  HermitianOperator reduced_b() const;

 private:
  QuantumState state_;
  std::size_t dim_a_;
  std::size_t dim_b_;
};

/// |psi+_d> = sum_i |ii> / sqrt(d)
BipartiteState maximally_entangled_state(std::size_t d);

/// Pure state sum_i sqrt(p_i) |ii>.
BipartiteState schmidt_state(std::span<const double> schmidt_probabilities);

class Povm {
 public:
  static constexpr double kPsdTol = 1e-10;
  static constexpr double kCompletenessTol = 1e-9;

  explicit Povm(std::vector<HermitianOperator> elements);

  std::size_t size() const noexcept { return elements_.size(); }
  std::size_t dim() const noexcept { return elements_.front().dim(); }
  const HermitianOperator& operator[](std::size_t i) const { return elements_.at(i); }
  const std::vector<HermitianOperator>& elements() const noexcept { return elements_; }

 private:
  std::vector<HermitianOperator> elements_;
};

/// Projective measurement onto the columns of a unitary.
Povm projective_measurement(const ComplexMatrix& basis);

/// {M_{a|x}}: one POVM per setting, all with the same outcome count.
class MeasurementAssemblage {
 public:
  explicit MeasurementAssemblage(std::vector<Povm> povms);

  std::size_t settings() const noexcept { return povms_.size(); }
  std::size_t outcomes() const noexcept { return povms_.front().size(); }
  std::size_t dim() const noexcept { return povms_.front().dim(); }
  const Povm& povm(std::size_t x) const { return povms_.at(x); }
  const HermitianOperator& element(std::size_t a, std::size_t x) const { return povms_.at(x)[a]; }

 private:
  std::vector<Povm> povms_;
};

struct AssemblageTolerances {
  double psd = 1e-10;
  double consistency = 1e-9;
  double trace = 1e-9;
};

/// {rho_{a|x}}: for every setting x, sum_a rho_{a|x} equals the same reduced
/// state. Members are indexed [x][a].
class Assemblage {
 public:
  explicit Assemblage(std::vector<std::vector<HermitianOperator>> members,
                      const AssemblageTolerances& tol = {});

  std::size_t settings() const noexcept { return members_.size(); }
  std::size_t outcomes() const noexcept { return members_.front().size(); }
  std::size_t dim() const noexcept { return reduced_.dim(); }
  const HermitianOperator& member(std::size_t a, std::size_t x) const {
    return members_.at(x).at(a);
  }
  const std::vector<std::vector<HermitianOperator>>& members() const noexcept {
    return members_;
  }
  const HermitianOperator& reduced() const noexcept { return reduced_; }

  /// Copy with setting x removed.
  Assemblage without_setting(std::size_t x) const;

 private:
  std::vector<std::vector<HermitianOperator>> members_;
  HermitianOperator reduced_;
};

/// Deterministic response function a = f(x), D(a|x) = delta_{a, f(x)}.
class DeterministicStrategy {
 public:
  DeterministicStrategy(std::vector<std::size_t> assignment, std::size_t outcomes);

  std::size_t settings() const noexcept { return assignment_.size(); }
  std::size_t outcomes() const noexcept { return outcomes_; }
  std::size_t outcome(std::size_t x) const { return assignment_.at(x); }
  bool responds(std::size_t a, std::size_t x) const { return assignment_.at(x) == a; }
  const std::vector<std::size_t>& assignment() const noexcept { return assignment_; }

  friend bool operator==(const DeterministicStrategy&, const DeterministicStrategy&) = default;

 private:
  std::vector<std::size_t> assignment_;
  std::size_t outcomes_;
};

/// All outcomes^settings strategies in lexicographic order of the assignment
/// tuple (f(0), ..., f(|X|-1)). Throws ErrorKind::Size above `cap`.
std::vector<DeterministicStrategy> enumerate_strategies(std::size_t outcomes,
                                                        std::size_t settings,
                                                        std::size_t cap = kDefaultStrategyCap);

/// outcomes^settings, or cap + 1 when that would overflow past the cap.
std::size_t strategy_count(std::size_t outcomes, std::size_t settings, std::size_t cap);

/// rho_{a|x} = Tr_A((M_{a|x} (x) 1) rho_AB)
Assemblage assemblage_from_state(const BipartiteState& rho, const MeasurementAssemblage& ma);

/// rho_{a|x} = sum_l D(a|x,l) p(l) sigma(l)
Assemblage unsteerable_assemblage(std::span<const double> weights,
                                  std::span<const DeterministicStrategy> strategies,
                                  std::span<const QuantumState> states);

/// Completely positive, trace non-increasing map rho -> sum_k K rho K^dag.
/// An empty Kraus list is the zero map.
class Subchannel {
 public:
  static constexpr double kTraceTol = 1e-9;

  Subchannel(std::size_t input_dim, std::size_t output_dim, std::vector<ComplexMatrix> kraus);

  std::size_t input_dim() const noexcept { return input_dim_; }
  std::size_t output_dim() const noexcept { return output_dim_; }
  const std::vector<ComplexMatrix>& kraus() const noexcept { return kraus_; }

  HermitianOperator apply(const HermitianOperator& rho) const;
  /// Heisenberg picture: Y -> sum_k K^dag Y K
  HermitianOperator apply_dual(const HermitianOperator& y) const;
  /// sum_k K^dag K
  HermitianOperator effect() const;

 private:
  std::size_t input_dim_;
  std::size_t output_dim_;
  std::vector<ComplexMatrix> kraus_;
};

HermitianOperator apply_subchannel(const Subchannel& s, const HermitianOperator& rho);

/// Subchannels summing to a trace-preserving channel (to 1e-8).
class Instrument {
 public:
  static constexpr double kTraceTol = 1e-8;

  explicit Instrument(std::vector<Subchannel> branches);

  std::size_t size() const noexcept { return branches_.size(); }
  std::size_t input_dim() const noexcept { return branches_.front().input_dim(); }
  std::size_t output_dim() const noexcept { return branches_.front().output_dim(); }
  const Subchannel& operator[](std::size_t a) const { return branches_.at(a); }
  const std::vector<Subchannel>& branches() const noexcept { return branches_; }

  /// The total channel sum_a Lambda_a applied to rho.
  HermitianOperator apply_total(const HermitianOperator& rho) const;

 private:
  std::vector<Subchannel> branches_;
};

/// K0 = |0><0| + sqrt(1-gamma)|1><1|, K1 = sqrt(gamma)|0><1| as two branches.
Instrument amplitude_damping_instrument(double gamma);

}  // namespace steer
