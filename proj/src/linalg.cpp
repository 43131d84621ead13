#include "steer/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <vector>

#include "steer/error.hpp"

namespace steer {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Dimension: return "dimension error";
    case ErrorKind::Validation: return "validation error";
    case ErrorKind::Size: return "size error";
    case ErrorKind::Convergence: return "convergence error";
    case ErrorKind::Unsupported: return "unsupported";
    case ErrorKind::NoAdvantage: return "no advantage";
    case ErrorKind::Parse: return "parse error";
  }
  return "error";
}

double max_abs(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

void require_finite(const ComplexMatrix& m, std::string_view what) {
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    const Complex z = m.data()[i];
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      fail(ErrorKind::Validation, std::string(what) + ": non-finite entry");
    }
  }
}

HermitianOperator::HermitianOperator(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) {
    std::ostringstream os;
    os << "operator must be square, got " << m.rows() << "x" << m.cols();
    fail(ErrorKind::Dimension, os.str());
  }
  require_finite(m, "operator");
  const double asym = max_abs(m - m.adjoint());
  const double scale = std::max(1.0, max_abs(m));
  if (asym > kHermiticityTol * scale) {
    std::ostringstream os;
    os << "operator is not Hermitian: ||H - H^dag||_max = " << asym;
    fail(ErrorKind::Validation, os.str());
  }
  m_ = 0.5 * (m + m.adjoint());
}

HermitianOperator symmetrize(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) fail(ErrorKind::Dimension, "symmetrize: non-square matrix");
  return HermitianOperator(ComplexMatrix(0.5 * (m + m.adjoint())),
                           HermitianOperator::Trusted{});
}

HermitianOperator HermitianOperator::zero(std::size_t dim) {
  const auto n = static_cast<Eigen::Index>(dim);
  return HermitianOperator(ComplexMatrix::Zero(n, n), Trusted{});
}

HermitianOperator HermitianOperator::identity(std::size_t dim) {
  const auto n = static_cast<Eigen::Index>(dim);
  return HermitianOperator(ComplexMatrix::Identity(n, n), Trusted{});
}

HermitianOperator HermitianOperator::projector(const ComplexVector& v) {
  return symmetrize(v * v.adjoint());
}

HermitianOperator HermitianOperator::diagonal(std::span<const double> entries) {
  ComplexMatrix m = ComplexMatrix::Zero(static_cast<Eigen::Index>(entries.size()),
                                        static_cast<Eigen::Index>(entries.size()));
  for (std::size_t i = 0; i < entries.size(); ++i) m(i, i) = entries[i];
  return HermitianOperator(m);
}

double HermitianOperator::trace() const { return m_.trace().real(); }

HermitianOperator& HermitianOperator::operator+=(const HermitianOperator& o) {
  if (o.dim() != dim()) fail(ErrorKind::Dimension, "operator sum: dimension mismatch");
  m_ += o.m_;
  return *this;
}

HermitianOperator& HermitianOperator::operator-=(const HermitianOperator& o) {
  if (o.dim() != dim()) fail(ErrorKind::Dimension, "operator difference: dimension mismatch");
  m_ -= o.m_;
  return *this;
}

HermitianOperator& HermitianOperator::operator*=(double s) {
  m_ *= s;
  return *this;
}

namespace {

double off_diagonal_norm(const ComplexMatrix& a) {
  double s = 0.0;
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      if (i != j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

}  // namespace

EigenDecomposition eig_hermitian(const HermitianOperator& h, int max_sweeps) {
  const Eigen::Index n = static_cast<Eigen::Index>(h.dim());
  ComplexMatrix a = h.matrix();
  ComplexMatrix v = ComplexMatrix::Identity(n, n);

  const double total = a.norm();
  const double target = 1e-14 * std::max(total, 1e-300);
  int sweep = 0;
  double off = off_diagonal_norm(a);
  while (off > target) {
    if (sweep++ >= max_sweeps) {
      std::ostringstream os;
      os << "Jacobi eigensolver did not converge after " << max_sweeps
         << " sweeps (off-diagonal norm " << off << ")";
      fail(ErrorKind::Convergence, os.str());
    }
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double mag = std::abs(a(p, q));
        if (mag == 0.0) continue;
        // Skip entries that are negligible against both diagonal entries.
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        if (sweep > 4 && std::abs(app) + 1e3 * mag == std::abs(app) &&
            std::abs(aqq) + 1e3 * mag == std::abs(aqq)) {
          a(p, q) = a(q, p) = 0.0;
          continue;
        }
        // Phase rotation makes a_pq real, then a real Givens rotation kills it.
        const Complex phase = a(p, q) / mag;  // e^{i phi}
        const double theta = (aqq - app) / (2.0 * mag);
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const Complex ce = c * std::conj(phase);
        const Complex se = s * std::conj(phase);

        // Columns: A <- A G with G_pp = c, G_qp = -s e^{-i phi}, G_pq = s, G_qq = c e^{-i phi}.
        for (Eigen::Index k = 0; k < n; ++k) {
          const Complex akp = a(k, p);
          const Complex akq = a(k, q);
          a(k, p) = c * akp - se * akq;
          a(k, q) = s * akp + ce * akq;
          const Complex vkp = v(k, p);
          const Complex vkq = v(k, q);
          v(k, p) = c * vkp - se * vkq;
          v(k, q) = s * vkp + ce * vkq;
        }
        // Rows: A <- G^dag A.
        for (Eigen::Index k = 0; k < n; ++k) {
          const Complex apk = a(p, k);
          const Complex aqk = a(q, k);
          a(p, k) = c * apk - s * phase * aqk;
          a(q, k) = s * apk + c * phase * aqk;
        }
        a(p, q) = a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
      }
    }
    off = off_diagonal_norm(a);
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j) {
    return a(i, i).real() < a(j, j).real();
  });
  EigenDecomposition out;
  out.eigenvalues.resize(n);
  out.eigenvectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out.eigenvalues(k) = a(order[k], order[k]).real();
    out.eigenvectors.col(k) = v.col(order[k]);
  }
  return out;
}

RealVector eigenvalues(const HermitianOperator& h) { return eig_hermitian(h).eigenvalues; }

double min_eigenvalue(const HermitianOperator& h) {
  if (h.dim() == 0) return 0.0;
  return eigenvalues(h)(0);
}

double max_eigenvalue(const HermitianOperator& h) {
  if (h.dim() == 0) return 0.0;
  const RealVector ev = eigenvalues(h);
  return ev(ev.size() - 1);
}

double operator_norm(const HermitianOperator& h) {
  if (h.dim() == 0) return 0.0;
  const RealVector ev = eigenvalues(h);
  return std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
}

bool is_psd(const HermitianOperator& h, double tol) { return min_eigenvalue(h) >= -tol; }

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b, std::size_t cap) {
  const auto rows = static_cast<std::size_t>(a.rows()) * static_cast<std::size_t>(b.rows());
  const auto cols = static_cast<std::size_t>(a.cols()) * static_cast<std::size_t>(b.cols());
  if (rows > cap || cols > cap) {
    std::ostringstream os;
    os << "Kronecker product " << rows << "x" << cols << " exceeds dimension cap " << cap;
    fail(ErrorKind::Size, os.str());
  }
  ComplexMatrix out(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

HermitianOperator kron(const HermitianOperator& a, const HermitianOperator& b,
                       std::size_t cap) {
  return symmetrize(kron(a.matrix(), b.matrix(), cap));
}

HermitianOperator partial_trace(const HermitianOperator& h, std::size_t dim_a,
                                std::size_t dim_b, Subsystem keep) {
  if (dim_a * dim_b != h.dim()) {
    std::ostringstream os;
    os << "partial trace: operator dimension " << h.dim() << " != " << dim_a << "*" << dim_b;
    fail(ErrorKind::Dimension, os.str());
  }
  const auto da = static_cast<Eigen::Index>(dim_a);
  const auto db = static_cast<Eigen::Index>(dim_b);
  const ComplexMatrix& m = h.matrix();
  if (keep == Subsystem::B) {
    ComplexMatrix out = ComplexMatrix::Zero(db, db);
    for (Eigen::Index i = 0; i < da; ++i) out += m.block(i * db, i * db, db, db);
    return symmetrize(out);
  }
  ComplexMatrix out(da, da);
  for (Eigen::Index i = 0; i < da; ++i)
    for (Eigen::Index j = 0; j < da; ++j)
      out(i, j) = m.block(i * db, j * db, db, db).trace();
  return symmetrize(out);
}

double hs_inner(const HermitianOperator& a, const HermitianOperator& b) {
  if (a.dim() != b.dim()) fail(ErrorKind::Dimension, "inner product: dimension mismatch");
  // Tr(AB) = sum_ij A_ij B_ji = sum_ij A_ij conj(B_ij) for Hermitian B.
  return (a.matrix().array() * b.matrix().conjugate().array()).sum().real();
}

HermitianOperator congruence(const ComplexMatrix& k, const HermitianOperator& h) {
  if (k.cols() != static_cast<Eigen::Index>(h.dim()))
    fail(ErrorKind::Dimension, "congruence: dimension mismatch");
  return symmetrize(k * h.matrix() * k.adjoint());
}

HermitianOperator psd_part(const HermitianOperator& h) {
  return spectral_map(h, [](double x) { return std::max(x, 0.0); });
}

}  // namespace steer
