#include <cmath>

#include "steer/error.hpp"
#include "steer/sdp.hpp"

namespace steer::sdp {

Matrix hermitian_to_real_embedding(const HermitianOperator& h) {
  const auto n = static_cast<Eigen::Index>(h.dim());
  const Matrix re = h.matrix().real();
  const Matrix im = h.matrix().imag();
  Matrix out(2 * n, 2 * n);
  out.topLeftCorner(n, n) = re;
  out.topRightCorner(n, n) = -im;
  out.bottomLeftCorner(n, n) = im;
  out.bottomRightCorner(n, n) = re;
  return out;
}

HermitianOperator real_embedding_to_hermitian(const Matrix& m) {
  if (m.rows() != m.cols() || m.rows() % 2 != 0)
    fail(ErrorKind::Dimension, "real embedding: expected an even square matrix");
  const Eigen::Index n = m.rows() / 2;
  const Matrix re = 0.5 * (m.topLeftCorner(n, n) + m.bottomRightCorner(n, n));
  const Matrix im = 0.5 * (m.bottomLeftCorner(n, n) - m.topRightCorner(n, n));
  ComplexMatrix out(n, n);
  out.real() = re;
  out.imag() = im;
  return symmetrize(out);
}

SdpProblem embed(const HermitianSdpProblem& hp) {
  if (hp.objective.size() != hp.block_dims.size())
    fail(ErrorKind::Dimension, "Hermitian SDP: objective block count does not match block_dims");
  SdpProblem p;
  p.block_dims.reserve(hp.block_dims.size());
  for (std::size_t k = 0; k < hp.block_dims.size(); ++k) {
    if (hp.objective[k].dim() != hp.block_dims[k])
      fail(ErrorKind::Dimension, "Hermitian SDP: objective block has wrong dimension");
    p.block_dims.push_back(2 * hp.block_dims[k]);
    p.objective.push_back(0.5 * hermitian_to_real_embedding(hp.objective[k]));
  }
  p.constraints.reserve(hp.constraints.size());
  for (const auto& hc : hp.constraints) {
    Constraint c;
    c.rhs = hc.rhs;
    c.terms.reserve(hc.terms.size());
    for (const auto& t : hc.terms) {
      if (t.block >= hp.block_dims.size() || t.value.dim() != hp.block_dims[t.block])
        fail(ErrorKind::Dimension, "Hermitian SDP: constraint term has wrong block or dimension");
      c.terms.push_back({t.block, 0.5 * hermitian_to_real_embedding(t.value)});
    }
    p.constraints.push_back(std::move(c));
  }
  return p;
}

HermitianSdpSolution solve(const HermitianSdpProblem& hp, const SolveOptions& options) {
  const SdpSolution s = solve(embed(hp), options);
  HermitianSdpSolution out;
  out.y = s.y;
  out.primal_value = s.primal_value;
  out.dual_value = s.dual_value;
  out.status = s.status;
  out.residuals = s.residuals;
  out.iterations = s.iterations;
  for (const auto& x : s.X) out.X.push_back(real_embedding_to_hermitian(x));
  // The real slack is emb(Z)/2.
  for (const auto& z : s.Z) out.Z.push_back(2.0 * real_embedding_to_hermitian(z));
  return out;
}

std::vector<HermitianOperator> hermitian_basis(std::size_t d) {
  std::vector<HermitianOperator> out;
  out.reserve(d * d);
  const auto n = static_cast<Eigen::Index>(d);
  for (Eigen::Index j = 0; j < n; ++j) {
    ComplexMatrix e = ComplexMatrix::Zero(n, n);
    e(j, j) = 1.0;
    out.emplace_back(e);
  }
  const double r = 1.0 / std::sqrt(2.0);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index k = j + 1; k < n; ++k) {
      ComplexMatrix s = ComplexMatrix::Zero(n, n);
      s(j, k) = s(k, j) = r;
      out.emplace_back(s);
      ComplexMatrix a = ComplexMatrix::Zero(n, n);
      a(j, k) = Complex(0, r);
      a(k, j) = Complex(0, -r);
      out.emplace_back(a);
    }
  }
  return out;
}

}  // namespace steer::sdp
