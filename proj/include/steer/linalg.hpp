#pragma once

// Dense complex linear algebra over small Hermitian operators.

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>

#include <Eigen/Dense>

namespace steer {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr std::size_t kDefaultDimensionCap = 4096;

/// Largest entry magnitude, 0 for an empty matrix.
double max_abs(const ComplexMatrix& m);

/// Throws ErrorKind::Validation naming `what` if any entry is NaN or Inf.
void require_finite(const ComplexMatrix& m, std::string_view what);

/// A square complex matrix equal to its adjoint.
///
/// Construction accepts matrices with ||H - H^dag||_max <= 1e-12 * max(1, ||H||_max)
/// and stores the symmetrized form (H + H^dag) / 2, so every stored operator is
/// exactly Hermitian. Anything further from Hermitian is rejected.
class HermitianOperator {
 public:
  static constexpr double kHermiticityTol = 1e-12;

  HermitianOperator() = default;
  explicit HermitianOperator(const ComplexMatrix& m);

  static HermitianOperator zero(std::size_t dim);
  static HermitianOperator identity(std::size_t dim);
  static HermitianOperator projector(const ComplexVector& v);
  static HermitianOperator diagonal(std::span<const double> entries);

  std::size_t dim() const noexcept { return static_cast<std::size_t>(m_.rows()); }
  const ComplexMatrix& matrix() const noexcept { return m_; }
  Complex operator()(std::size_t i, std::size_t j) const { return m_(i, j); }

  double trace() const;

  HermitianOperator& operator+=(const HermitianOperator& o);
  HermitianOperator& operator-=(const HermitianOperator& o);
  HermitianOperator& operator*=(double s);

  friend HermitianOperator operator+(HermitianOperator a, const HermitianOperator& b) {
    return a += b;
  }
  friend HermitianOperator operator-(HermitianOperator a, const HermitianOperator& b) {
    return a -= b;
  }
  friend HermitianOperator operator*(double s, HermitianOperator a) { return a *= s; }
  friend HermitianOperator operator*(HermitianOperator a, double s) { return a *= s; }

 private:
  struct Trusted {};
  HermitianOperator(ComplexMatrix m, Trusted) : m_(std::move(m)) {}
  friend HermitianOperator symmetrize(const ComplexMatrix& m);

  ComplexMatrix m_;
};

/// (M + M^dag)/2 without the Hermiticity check. For internal results whose
/// anti-Hermitian part is pure roundoff.
HermitianOperator symmetrize(const ComplexMatrix& m);

struct EigenDecomposition {
  RealVector eigenvalues;     // ascending
  ComplexMatrix eigenvectors; // orthonormal columns, same order
};

/// Cyclic Jacobi eigensolver. Throws ErrorKind::Convergence (with the final
/// off-diagonal residual) if the sweep cap is exhausted.
EigenDecomposition eig_hermitian(const HermitianOperator& h, int max_sweeps = 100);

RealVector eigenvalues(const HermitianOperator& h);
double min_eigenvalue(const HermitianOperator& h);
double max_eigenvalue(const HermitianOperator& h);

/// max |eigenvalue|
double operator_norm(const HermitianOperator& h);

bool is_psd(const HermitianOperator& h, double tol);

/// Kronecker product. Throws ErrorKind::Size when either resulting dimension
/// exceeds `cap`.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b,
                   std::size_t cap = kDefaultDimensionCap);
HermitianOperator kron(const HermitianOperator& a, const HermitianOperator& b,
                       std::size_t cap = kDefaultDimensionCap);

enum class Subsystem { A, B };

/// Reduced operator on `keep` of an operator on A (x) B.
HermitianOperator partial_trace(const HermitianOperator& h, std::size_t dim_a,
                                std::size_t dim_b, Subsystem keep);

/// Re Tr(A B); exact for Hermitian A, B.
double hs_inner(const HermitianOperator& a, const HermitianOperator& b);

/// K H K^dag
HermitianOperator congruence(const ComplexMatrix& k, const HermitianOperator& h);

/// Applies f to the spectrum: V f(diag) V^dag.
template <class F>
HermitianOperator spectral_map(const HermitianOperator& h, F&& f) {
  const EigenDecomposition e = eig_hermitian(h);
  RealVector mapped(e.eigenvalues.size());
  for (Eigen::Index i = 0; i < mapped.size(); ++i) mapped(i) = f(e.eigenvalues(i));
  return symmetrize(e.eigenvectors * mapped.cast<Complex>().asDiagonal() *
                    e.eigenvectors.adjoint());
}

/// Nearest PSD operator in Frobenius norm (negative eigenvalues clipped).
HermitianOperator psd_part(const HermitianOperator& h);

}  // namespace steer
