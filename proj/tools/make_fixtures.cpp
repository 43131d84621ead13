// Writes the JSON fixtures under fixtures/. Usage: make_fixtures <dir>

#include <cmath>
#include <fstream>
#include <iostream>
#include <string>

#include "steer/io.hpp"
#include "steer/mub.hpp"
#include "steer/quantum.hpp"

using namespace steer;

namespace {

void write(const std::string& dir, const std::string& name, const io::Json& j) {
  std::ofstream f(dir + "/" + name);
  f << j.dump(2) << "\n";
  if (!f) throw std::runtime_error("cannot write " + name);
}

ComplexVector ket(std::initializer_list<Complex> v) {
  ComplexVector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (auto c : v) out(i++) = c;
  return out.normalized();
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: make_fixtures <dir>\n";
    return 1;
  }
  const std::string dir = argv[1];
  try {
    const auto z0 = HermitianOperator::projector(ket({1, 0}));
    const auto z1 = HermitianOperator::projector(ket({0, 1}));
    const auto plus = HermitianOperator::projector(ket({1, 1}));
    const auto minus = HermitianOperator::projector(ket({1, -1}));

    // 1/2 |0><0| (x) |0><0| + 1/2 |1><1| (x) |+><+|
    const HermitianOperator sep = 0.5 * kron(z0, z0) + 0.5 * kron(z1, plus);
    write(dir, "separable_state.json", io::state_to_json(BipartiteState(QuantumState(sep), 2, 2)));
    write(dir, "bell_state.json", io::state_to_json(maximally_entangled_state(2)));
    write(dir, "max_entangled_d3.json", io::state_to_json(maximally_entangled_state(3)));
    const double p[] = {0.9, 0.1};
    write(dir, "schmidt_09_01.json", io::state_to_json(schmidt_state(p)));
    const double q[] = {1.0, 0.0};
    write(dir, "product_pure_state.json", io::state_to_json(schmidt_state(q)));

    const MubFamily m2 = build_mubs(2);
    const MeasurementAssemblage zx({projective_measurement(m2.basis(0)), projective_measurement(m2.basis(1))});
    write(dir, "pauli_zx.json", io::measurements_to_json(zx));
    write(dir, "pauli_zxy.json", io::measurements_to_json(mub_measurements(m2)));
    write(dir, "mub_d2_assemblage.json", io::assemblage_to_json(mub_assemblage(m2)));
    write(dir, "mub_d3_assemblage.json", io::assemblage_to_json(mub_assemblage(build_mubs(3))));

    // LHS model: four strategies on two settings, hidden states |0>, |1>, |+>, |->.
    const auto strategies = enumerate_strategies(2, 2);
    const double w[] = {0.4, 0.1, 0.2, 0.3};
    const QuantumState s[] = {QuantumState(z0), QuantumState(z1), QuantumState(plus), QuantumState(minus)};
    write(dir, "unsteerable_assemblage.json",
          io::assemblage_to_json(unsteerable_assemblage(w, strategies, s)));

    // Same shape as the MUB d=2 assemblage with one member made non-Hermitian.
    io::Json bad = io::assemblage_to_json(mub_assemblage(m2));
    bad["members"][0][1]["data"][1] = {0.3, 0.0};
    write(dir, "nonhermitian_assemblage.json", bad);

    write(dir, "amplitude_damping_0.3.json", io::instrument_to_json(amplitude_damping_instrument(0.3)));
    write(dir, "amplitude_damping_1.json", io::instrument_to_json(amplitude_damping_instrument(1.0)));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
