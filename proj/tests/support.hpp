#pragma once

// Fixture generators and independent oracles shared by the test binaries.

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Eigenvalues>

#include "steer/discrimination.hpp"
#include "steer/linalg.hpp"
#include "steer/quantum.hpp"
#include "steer/random.hpp"
#include "steer/robustness.hpp"
#include "steer/sdp.hpp"

namespace testing {

using namespace steer;

/// Eigenvalues through Eigen's general complex Schur solver, ascending.
inline std::vector<double> oracle_eigenvalues(const ComplexMatrix& m) {
  Eigen::ComplexEigenSolver<ComplexMatrix> es(m, false);
  std::vector<double> ev;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) ev.push_back(es.eigenvalues()(i).real());
  std::sort(ev.begin(), ev.end());
  return ev;
}

inline double oracle_max_eigenvalue(const ComplexMatrix& m) { return oracle_eigenvalues(m).back(); }
inline double oracle_min_eigenvalue(const ComplexMatrix& m) { return oracle_eigenvalues(m).front(); }

/// sum_l p_l omega_l (x) sigma_l with random mixed omega, sigma.
inline BipartiteState random_separable_state(std::size_t da, std::size_t db, std::size_t terms, Rng& rng) {
  HermitianOperator rho = HermitianOperator::zero(da * db);
  std::vector<double> w(terms);
  double total = 0.0;
  for (auto& v : w) total += (v = 0.1 + rng.uniform());
  for (std::size_t k = 0; k < terms; ++k) {
    const auto a = random_mixed_state(da, 1 + rng.index(da), rng);
    const auto b = random_mixed_state(db, 1 + rng.index(db), rng);
    rho += (w[k] / total) * kron(a.op(), b.op());
  }
  return BipartiteState(QuantumState((1.0 / rho.trace()) * rho), da, db);
}

/// Haar pure state on C^da (x) C^db (entangled with probability one).
inline BipartiteState random_pure_state(std::size_t da, std::size_t db, Rng& rng) {
  return BipartiteState(QuantumState(HermitianOperator::projector(haar_pure_state(da * db, rng))), da, db);
}

/// Random projective measurement assemblage (Haar bases).
inline MeasurementAssemblage random_projective(std::size_t d, std::size_t settings, Rng& rng) {
  std::vector<Povm> povms;
  for (std::size_t x = 0; x < settings; ++x) povms.push_back(projective_measurement(haar_unitary(d, rng)));
  return MeasurementAssemblage(std::move(povms));
}

/// Random dense one-way strategy: probe POVM on the instrument output and one
/// ancilla POVM over all branches per probe outcome.
inline OneWayStrategy random_one_way(Rng& rng, std::size_t output_dim, std::size_t ancilla_dim,
                                     std::size_t branches, std::size_t probe_outcomes) {
  Povm probe = random_povm(output_dim, probe_outcomes, rng);
  std::vector<Povm> anc;
  for (std::size_t y = 0; y < probe_outcomes; ++y) anc.push_back(random_povm(ancilla_dim, branches, rng));
  return OneWayStrategy::dense(std::move(probe), anc);
}

/// Random assemblage with d <= 3 and |A|, |X| in {2, 3}: half from pure
/// entangled states, half from mixed ones.
inline Assemblage random_assemblage(Rng& rng, std::size_t d, std::size_t na, std::size_t nx) {
  const bool pure = rng.uniform() < 0.5;
  const BipartiteState s = pure ? random_pure_state(d, d, rng)
                                : BipartiteState(random_mixed_state(d * d, 2, rng), d, d);
  const MeasurementAssemblage ma = na == d && rng.uniform() < 0.5 ? random_projective(d, nx, rng)
                                                                   : random_measurement_assemblage(d, na, nx, rng);
  return assemblage_from_state(s, ma);
}

/// White-noise LHS margin: min t such that rho_{a|x} + t 1/(d |A|) has an
/// exact LHS model. The assemblage is unsteerable iff t <= 0.
inline double white_noise_margin(const Assemblage& a, const sdp::SolveOptions& opt = {}) {
  const std::size_t na = a.outcomes();
  const std::size_t nx = a.settings();
  const std::size_t d = a.dim();
  const auto strategies = enumerate_strategies(na, nx);
  const std::size_t nl = strategies.size();
  sdp::HermitianSdpProblem p;
  p.block_dims.assign(nl, d);
  p.block_dims.push_back(1);
  p.block_dims.push_back(1);
  p.objective.assign(nl, HermitianOperator::zero(d));
  p.objective.push_back(HermitianOperator::identity(1));
  p.objective.push_back(-1.0 * HermitianOperator::identity(1));
  const auto basis = sdp::hermitian_basis(d);
  const HermitianOperator noise = (1.0 / static_cast<double>(d * na)) * HermitianOperator::identity(d);
  for (std::size_t x = 0; x < nx; ++x) {
    for (std::size_t o = 0; o < na; ++o) {
      if (x > 0 && o + 1 == na) continue;  // implied by the other settings' sums
      for (const auto& e : basis) {
        sdp::HermitianConstraint c;
        for (std::size_t l = 0; l < nl; ++l)
          if (strategies[l].responds(o, x)) c.terms.push_back({l, e});
        const double n = hs_inner(e, noise);
        c.terms.push_back({nl, -n * HermitianOperator::identity(1)});
        c.terms.push_back({nl + 1, n * HermitianOperator::identity(1)});
        c.rhs = hs_inner(e, a.member(o, x));
        p.constraints.push_back(std::move(c));
      }
    }
  }
  const auto s = sdp::solve(p, opt);
  return s.primal_value;
}

/// Random real SDP with a strictly feasible primal and dual by construction.
inline sdp::SdpProblem random_feasible_sdp(Rng& rng, std::vector<std::size_t> dims, std::size_t m) {
  sdp::SdpProblem p;
  p.block_dims = dims;
  auto rand_sym = [&](std::size_t n) {
    sdp::Matrix g(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < g.rows(); ++i)
      for (Eigen::Index j = 0; j < g.cols(); ++j) g(i, j) = rng.normal();
    return sdp::Matrix(0.5 * (g + g.transpose()));
  };
  auto rand_pd = [&](std::size_t n) {
    sdp::Matrix g(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < g.rows(); ++i)
      for (Eigen::Index j = 0; j < g.cols(); ++j) g(i, j) = rng.normal();
    return sdp::Matrix(g * g.transpose() + sdp::Matrix::Identity(g.rows(), g.cols()));
  };
  std::vector<sdp::Matrix> x0;
  for (auto n : dims) x0.push_back(rand_pd(n));
  std::vector<double> y0(m);
  for (auto& v : y0) v = rng.normal();
  for (auto n : dims) p.objective.push_back(rand_pd(n));  // Z0, shifted below
  for (std::size_t i = 0; i < m; ++i) {
    sdp::Constraint c;
    c.rhs = 0.0;
    for (std::size_t k = 0; k < dims.size(); ++k) {
      sdp::Matrix a = rand_sym(dims[k]);
      c.rhs += (a.array() * x0[k].array()).sum();
      p.objective[k] += y0[i] * a;
      c.terms.push_back({k, std::move(a)});
    }
    p.constraints.push_back(std::move(c));
  }
  return p;
}

/// Asserted on every solve in the tests: witness and LHS feasibility.
struct Feasibility {
  double witness = 0.0;
  double lhs = 0.0;
};

inline Feasibility feasibility(const SteeringReport& r, const Assemblage& a) {
  return {witness_violation(r.witness), lhs_violation(r.strategies, r.lhs_model, a)};
}

}  // namespace testing
