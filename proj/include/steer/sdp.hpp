#pragma once

// Primal-dual interior-point solver for block-diagonal semidefinite programs
//
//   minimize    <C, X>
//   subject to  <A_i, X> = b_i,  i = 1..m
//               X = diag(X_1, ..., X_k) >= 0
//
// with dual
//
//   maximize    b^T y
//   subject to  C - sum_i y_i A_i = Z >= 0.
//
// Search direction is HKM (dX = (K - X dZ) Z^-1 - X, symmetrized) with a
// Mehrotra predictor-corrector; the method is infeasible-start. The Schur
// complement M_ij = Tr(A_i X A_j Z^-1) is formed densely and factored by
// Cholesky. A Hermitian front end solves complex problems through the real
// embedding H -> [[Re H, -Im H], [Im H, Re H]].

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "steer/linalg.hpp"

namespace steer::sdp {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// One nonzero block of a constraint operator.
struct BlockTerm {
  std::size_t block = 0;
  Matrix value;  // symmetric, block_dims[block] square
};

struct Constraint {
  std::vector<BlockTerm> terms;
  double rhs = 0.0;
};

struct SdpProblem {
  std::vector<std::size_t> block_dims;
  std::vector<Matrix> objective;  // one symmetric matrix per block
  std::vector<Constraint> constraints;

  /// Checks shapes, symmetry and that the constraint operators are linearly
  /// independent (smallest eigenvalue of the unit-diagonal Gram matrix above
  /// `independence_tol`). Throws steer::Error on violation.
  void validate(double independence_tol = 1e-10) const;

  std::size_t total_dim() const;
};

enum class SolveStatus { Optimal, MaxIter, NumericalFailure };

const char* to_string(SolveStatus status) noexcept;

struct Residuals {
  double primal_infeasibility = 0.0;  // ||b - A(X)|| / (1 + ||b||)
  double dual_infeasibility = 0.0;    // ||C - Z - A^T y||_F / (1 + ||C||_F)
  double relative_gap = 0.0;          // |pval - dval| / (1 + |pval| + |dval|)
};

struct IterationInfo {
  int iteration = 0;
  double primal_value = 0.0;
  double dual_value = 0.0;
  double complementarity = 0.0;  // <X, Z>
  Residuals residuals;
  double primal_step = 0.0;
  double dual_step = 0.0;
};

struct SolveOptions {
  double gap_tol = 1e-8;
  double feas_tol = 1e-8;
  int max_iter = 200;
  double step_fraction = 0.98;
  bool validate = true;
  std::function<void(const IterationInfo&)> on_iteration;
};

struct SdpSolution {
  std::vector<Matrix> X;
  Vector y;
  std::vector<Matrix> Z;
  double primal_value = 0.0;
  double dual_value = 0.0;
  SolveStatus status = SolveStatus::NumericalFailure;
  Residuals residuals;
  int iterations = 0;
};

/// Runs the interior-point method. Non-optimal outcomes are reported through
/// `status`; the returned iterate is the best one seen.
SdpSolution solve(const SdpProblem& problem, const SolveOptions& options = {});

/// Debug dump {"blocks":[..],"C":[..],"constraints":[{"terms":[{"block","matrix"}],"b"}]}.
/// Not a stable format.
std::string to_debug_json(const SdpProblem& problem);

// ---------------------------------------------------------------------------
// Hermitian front end

struct HermitianTerm {
  std::size_t block = 0;
  HermitianOperator value;
};

struct HermitianConstraint {
  std::vector<HermitianTerm> terms;
  double rhs = 0.0;
};

struct HermitianSdpProblem {
  std::vector<std::size_t> block_dims;
  std::vector<HermitianOperator> objective;
  std::vector<HermitianConstraint> constraints;
};

struct HermitianSdpSolution {
  std::vector<HermitianOperator> X;
  Vector y;
  std::vector<HermitianOperator> Z;
  double primal_value = 0.0;
  double dual_value = 0.0;
  SolveStatus status = SolveStatus::NumericalFailure;
  Residuals residuals;
  int iterations = 0;
};

/// [[Re H, -Im H], [Im H, Re H]]
Matrix hermitian_to_real_embedding(const HermitianOperator& h);

/// Inverse of the embedding after projecting onto embedded form.
HermitianOperator real_embedding_to_hermitian(const Matrix& m);

/// Real problem with every operator embedded and halved, so that
/// <emb(A)/2, emb(X)> = Re Tr(A X) and right-hand sides stay unchanged.
SdpProblem embed(const HermitianSdpProblem& problem);

HermitianSdpSolution solve(const HermitianSdpProblem& problem, const SolveOptions& options = {});

/// Orthonormal basis of d x d Hermitian matrices under Re Tr(A B): diagonal
/// units, then (E_jk + E_kj)/sqrt2 and i(E_jk - E_kj)/sqrt2 for j < k.
std::vector<HermitianOperator> hermitian_basis(std::size_t d);

}  // namespace steer::sdp
