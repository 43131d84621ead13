#include "steer/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "steer/error.hpp"

namespace steer::sdp {

const char* to_string(SolveStatus status) noexcept {
  switch (status) {
    case SolveStatus::Optimal: return "Optimal";
    case SolveStatus::MaxIter: return "MaxIter";
    case SolveStatus::NumericalFailure: return "NumericalFailure";
  }
  return "Unknown";
}

namespace {

using BlockMatrix = std::vector<Matrix>;

// For every block, the (constraint, term) pairs that touch it.
struct Incidence {
  struct Entry {
    std::size_t constraint;
    const Matrix* value;
  };
  std::vector<std::vector<Entry>> by_block;

  explicit Incidence(const SdpProblem& p) : by_block(p.block_dims.size()) {
    for (std::size_t i = 0; i < p.constraints.size(); ++i)
      for (const auto& t : p.constraints[i].terms) by_block[t.block].push_back({i, &t.value});
  }
};

double inner(const Matrix& a, const Matrix& b) { return (a.array() * b.array()).sum(); }

double inner(const BlockMatrix& a, const BlockMatrix& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += inner(a[k], b[k]);
  return s;
}

double frobenius(const BlockMatrix& a) {
  double s = 0.0;
  for (const auto& m : a) s += m.squaredNorm();
  return std::sqrt(s);
}

Vector apply_a(const SdpProblem& p, const BlockMatrix& x) {
  Vector out(static_cast<Eigen::Index>(p.constraints.size()));
  for (std::size_t i = 0; i < p.constraints.size(); ++i) {
    double s = 0.0;
    for (const auto& t : p.constraints[i].terms) s += inner(t.value, x[t.block]);
    out(static_cast<Eigen::Index>(i)) = s;
  }
  return out;
}

BlockMatrix apply_at(const SdpProblem& p, const Incidence& inc, const Vector& y) {
  BlockMatrix out(p.block_dims.size());
  for (std::size_t b = 0; b < p.block_dims.size(); ++b) {
    const auto n = static_cast<Eigen::Index>(p.block_dims[b]);
    out[b] = Matrix::Zero(n, n);
    for (const auto& e : inc.by_block[b]) out[b] += y(static_cast<Eigen::Index>(e.constraint)) * *e.value;
  }
  return out;
}

Matrix sym(const Matrix& m) { return 0.5 * (m + m.transpose()); }

// Largest alpha with x + alpha * dx >= 0, +inf if unbounded.
double max_step(const BlockMatrix& x, const BlockMatrix& dx) {
  double alpha = std::numeric_limits<double>::infinity();
  for (std::size_t b = 0; b < x.size(); ++b) {
    Eigen::LLT<Matrix> llt(x[b]);
    if (llt.info() != Eigen::Success) return 0.0;
    const Matrix li_dx = llt.matrixL().solve(dx[b]);
    const Matrix w = llt.matrixL().solve(li_dx.transpose());
    Eigen::SelfAdjointEigenSolver<Matrix> es(sym(w), Eigen::EigenvaluesOnly);
    const double lo = es.eigenvalues()(0);
    if (lo < 0) alpha = std::min(alpha, -1.0 / lo);
  }
  return alpha;
}

bool all_positive_definite(const BlockMatrix& x) {
  for (const auto& m : x) {
    Eigen::LLT<Matrix> llt(m);
    if (llt.info() != Eigen::Success) return false;
  }
  return true;
}

BlockMatrix axpy(const BlockMatrix& x, double alpha, const BlockMatrix& dx) {
  BlockMatrix out(x.size());
  for (std::size_t b = 0; b < x.size(); ++b) out[b] = x[b] + alpha * dx[b];
  return out;
}

struct Direction {
  BlockMatrix dx;
  Vector dy;
  BlockMatrix dz;
};

}  // namespace

std::size_t SdpProblem::total_dim() const {
  std::size_t n = 0;
  for (auto d : block_dims) n += d;
  return n;
}

void SdpProblem::validate(double independence_tol) const {
  if (block_dims.empty()) fail(ErrorKind::Validation, "SDP: no blocks");
  if (objective.size() != block_dims.size())
    fail(ErrorKind::Dimension, "SDP: objective block count does not match block_dims");
  auto check_block = [&](std::size_t b, const Matrix& m, const std::string& what) {
    const auto n = static_cast<Eigen::Index>(block_dims[b]);
    if (m.rows() != n || m.cols() != n) {
      std::ostringstream os;
      os << "SDP: " << what << " has shape " << m.rows() << "x" << m.cols() << ", block " << b
         << " is " << n << "x" << n;
      fail(ErrorKind::Dimension, os.str());
    }
    if (!m.allFinite()) fail(ErrorKind::Validation, "SDP: " + what + " has non-finite entries");
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
      fail(ErrorKind::Validation, "SDP: " + what + " is not symmetric");
  };
  for (std::size_t b = 0; b < block_dims.size(); ++b) {
    if (block_dims[b] == 0) fail(ErrorKind::Validation, "SDP: empty block");
    check_block(b, objective[b], "objective block");
  }
  for (std::size_t i = 0; i < constraints.size(); ++i) {
    if (!std::isfinite(constraints[i].rhs)) fail(ErrorKind::Validation, "SDP: non-finite rhs");
    for (const auto& t : constraints[i].terms) {
      if (t.block >= block_dims.size()) fail(ErrorKind::Dimension, "SDP: term refers to missing block");
      check_block(t.block, t.value, "constraint " + std::to_string(i));
    }
  }
  const std::size_t m = constraints.size();
  if (m == 0) return;
  Matrix gram = Matrix::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
  const Incidence inc(*this);
  for (const auto& entries : inc.by_block)
    for (const auto& ei : entries)
      for (const auto& ej : entries)
        gram(static_cast<Eigen::Index>(ei.constraint), static_cast<Eigen::Index>(ej.constraint)) +=
            inner(*ei.value, *ej.value);
  const Vector diag = gram.diagonal();
  for (Eigen::Index i = 0; i < diag.size(); ++i)
    if (!(diag(i) > 0)) fail(ErrorKind::Validation, "SDP: constraint " + std::to_string(i) + " is zero");
  const Vector inv_sqrt = diag.cwiseSqrt().cwiseInverse();
  const Matrix normalized = inv_sqrt.asDiagonal() * gram * inv_sqrt.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Matrix> es(normalized, Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues()(0);
  if (lo < independence_tol) {
    std::ostringstream os;
    os << "SDP: constraint operators are (nearly) linearly dependent (Gram eigenvalue " << lo << ")";
    fail(ErrorKind::Validation, os.str());
  }
}

SdpSolution solve(const SdpProblem& p, const SolveOptions& opts) {
  if (opts.validate) p.validate();
  const std::size_t nblocks = p.block_dims.size();
  const auto m = static_cast<Eigen::Index>(p.constraints.size());
  const Incidence inc(p);

  Vector b(m);
  for (Eigen::Index i = 0; i < m; ++i) b(i) = p.constraints[static_cast<std::size_t>(i)].rhs;
  const double b_norm = b.norm();
  const double c_norm = frobenius(p.objective);
  const double n_total = static_cast<double>(p.total_dim());

  double c_op = 0.0;
  for (const auto& c : p.objective) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(c, Eigen::EigenvaluesOnly);
    c_op = std::max(c_op, es.eigenvalues().cwiseAbs().maxCoeff());
  }
  const double tau = 1.0 + (m > 0 ? b.cwiseAbs().maxCoeff() : 0.0) + c_op;

  BlockMatrix x(nblocks), z(nblocks);
  for (std::size_t k = 0; k < nblocks; ++k) {
    const auto n = static_cast<Eigen::Index>(p.block_dims[k]);
    x[k] = tau * Matrix::Identity(n, n);
    z[k] = tau * Matrix::Identity(n, n);
  }
  Vector y = Vector::Zero(m);

  SdpSolution best;
  double best_merit = std::numeric_limits<double>::infinity();
  SolveStatus status = SolveStatus::MaxIter;
  double last_ap = 0.0, last_ad = 0.0;
  int iter = 0;

  for (;; ++iter) {
    const Vector rp = b - apply_a(p, x);
    const BlockMatrix aty = apply_at(p, inc, y);
    BlockMatrix rd(nblocks);
    for (std::size_t k = 0; k < nblocks; ++k) rd[k] = p.objective[k] - z[k] - aty[k];

    const double pval = inner(p.objective, x);
    const double dval = b.dot(y);
    const double xz = inner(x, z);
    Residuals res;
    res.primal_infeasibility = rp.norm() / (1.0 + b_norm);
    res.dual_infeasibility = frobenius(rd) / (1.0 + c_norm);
    res.relative_gap = std::abs(pval - dval) / (1.0 + std::abs(pval) + std::abs(dval));

    if (opts.on_iteration)
      opts.on_iteration({iter, pval, dval, xz, res, last_ap, last_ad});

    const double merit = std::max({res.relative_gap, res.primal_infeasibility, res.dual_infeasibility});
    if (merit < best_merit) {
      best_merit = merit;
      best.X = x;
      best.y = y;
      best.Z = z;
      best.primal_value = pval;
      best.dual_value = dval;
      best.residuals = res;
      best.iterations = iter;
    }

    if (res.relative_gap <= opts.gap_tol && res.primal_infeasibility <= opts.feas_tol &&
        res.dual_infeasibility <= opts.feas_tol) {
      status = SolveStatus::Optimal;
      break;
    }
    if (iter >= opts.max_iter) {
      status = SolveStatus::MaxIter;
      break;
    }

    const double mu = xz / n_total;

    BlockMatrix zinv(nblocks);
    bool ok = true;
    for (std::size_t k = 0; k < nblocks && ok; ++k) {
      Eigen::LLT<Matrix> llt(z[k]);
      if (llt.info() != Eigen::Success) {
        ok = false;
        break;
      }
      const auto n = static_cast<Eigen::Index>(p.block_dims[k]);
      zinv[k] = sym(llt.solve(Matrix::Identity(n, n)));
    }
    if (!ok) {
      status = SolveStatus::NumericalFailure;
      break;
    }

    // Schur complement M_ij = sum_blocks Tr(A_i X A_j Z^-1).
    Matrix schur = Matrix::Zero(m, m);
    for (std::size_t k = 0; k < nblocks; ++k) {
      const auto& entries = inc.by_block[k];
      for (std::size_t s = 0; s < entries.size(); ++s) {
        const Matrix g = x[k] * *entries[s].value * zinv[k];
        const auto i = static_cast<Eigen::Index>(entries[s].constraint);
        for (std::size_t t = s; t < entries.size(); ++t) {
          const auto j = static_cast<Eigen::Index>(entries[t].constraint);
          const double v = inner(*entries[t].value, g);
          schur(i, j) += v;
          if (i != j) schur(j, i) += v;
        }
      }
    }
    Eigen::LLT<Matrix> schur_llt(schur);
    // Near convergence the Schur complement can lose definiteness to roundoff;
    // a small diagonal shift keeps the direction usable.
    const double schur_scale = std::max(1.0, schur.diagonal().cwiseAbs().maxCoeff());
    for (double shift = 1e-14; schur_llt.info() != Eigen::Success && shift <= 1e-8; shift *= 100.0)
      schur_llt.compute(schur + (shift * schur_scale) * Matrix::Identity(m, m));
    if (schur_llt.info() != Eigen::Success) {
      status = SolveStatus::NumericalFailure;
      break;
    }

    // HKM direction for complementarity target K: X Z + dX Z + X dZ = K.
    auto direction = [&](const BlockMatrix& target) {
      BlockMatrix rhs_mat(nblocks);
      for (std::size_t k = 0; k < nblocks; ++k) rhs_mat[k] = (x[k] * rd[k] - target[k]) * zinv[k];
      const Vector h = b + apply_a(p, rhs_mat);
      Direction d;
      d.dy = schur_llt.solve(h);
      const BlockMatrix atdy = apply_at(p, inc, d.dy);
      d.dz.resize(nblocks);
      d.dx.resize(nblocks);
      for (std::size_t k = 0; k < nblocks; ++k) {
        d.dz[k] = rd[k] - atdy[k];
        d.dx[k] = sym((target[k] - x[k] * d.dz[k]) * zinv[k] - x[k]);
      }
      return d;
    };

    BlockMatrix zero_target(nblocks);
    for (std::size_t k = 0; k < nblocks; ++k) {
      const auto n = static_cast<Eigen::Index>(p.block_dims[k]);
      zero_target[k] = Matrix::Zero(n, n);
    }
    const Direction pred = direction(zero_target);
    const double ap_aff = std::min(1.0, max_step(x, pred.dx));
    const double ad_aff = std::min(1.0, max_step(z, pred.dz));
    const double mu_aff = inner(axpy(x, ap_aff, pred.dx), axpy(z, ad_aff, pred.dz)) / n_total;
    const double sigma = std::clamp(std::pow(mu_aff / mu, 3.0), 0.0, 1.0);

    BlockMatrix target(nblocks);
    for (std::size_t k = 0; k < nblocks; ++k) {
      const auto n = static_cast<Eigen::Index>(p.block_dims[k]);
      target[k] = sigma * mu * Matrix::Identity(n, n) - pred.dx[k] * pred.dz[k];
    }
    const Direction corr = direction(target);

    double ap = std::min(1.0, opts.step_fraction * max_step(x, corr.dx));
    double ad = std::min(1.0, opts.step_fraction * max_step(z, corr.dz));

    // Cholesky back-off guards the eigenvalue-based step against roundoff.
    BlockMatrix x_new = axpy(x, ap, corr.dx);
    for (int tries = 0; !all_positive_definite(x_new) && tries < 30; ++tries) {
      ap *= 0.8;
      x_new = axpy(x, ap, corr.dx);
    }
    BlockMatrix z_new = axpy(z, ad, corr.dz);
    for (int tries = 0; !all_positive_definite(z_new) && tries < 30; ++tries) {
      ad *= 0.8;
      z_new = axpy(z, ad, corr.dz);
    }
    if (!all_positive_definite(x_new) || !all_positive_definite(z_new) ||
        (ap < 1e-12 && ad < 1e-12)) {
      status = SolveStatus::NumericalFailure;
      break;
    }
    x = std::move(x_new);
    z = std::move(z_new);
    y += ad * corr.dy;
    last_ap = ap;
    last_ad = ad;
  }

  if (status == SolveStatus::Optimal) {
    best.X = x;
    best.y = y;
    best.Z = z;
    best.primal_value = inner(p.objective, x);
    best.dual_value = b.dot(y);
    best.iterations = iter;
    const Vector rp = b - apply_a(p, x);
    const BlockMatrix aty = apply_at(p, inc, y);
    BlockMatrix rd(nblocks);
    for (std::size_t k = 0; k < nblocks; ++k) rd[k] = p.objective[k] - z[k] - aty[k];
    best.residuals.primal_infeasibility = rp.norm() / (1.0 + b_norm);
    best.residuals.dual_infeasibility = frobenius(rd) / (1.0 + c_norm);
    best.residuals.relative_gap = std::abs(best.primal_value - best.dual_value) /
                                  (1.0 + std::abs(best.primal_value) + std::abs(best.dual_value));
  }
  best.status = status;
  return best;
}

std::string to_debug_json(const SdpProblem& p) {
  auto mat = [](const Matrix& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      nlohmann::json row = nlohmann::json::array();
      for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
      rows.push_back(std::move(row));
    }
    return rows;
  };
  nlohmann::json j;
  j["blocks"] = p.block_dims;
  j["C"] = nlohmann::json::array();
  for (const auto& c : p.objective) j["C"].push_back(mat(c));
  j["constraints"] = nlohmann::json::array();
  for (const auto& c : p.constraints) {
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& t : c.terms) terms.push_back({{"block", t.block}, {"matrix", mat(t.value)}});
    j["constraints"].push_back({{"terms", std::move(terms)}, {"b", c.rhs}});
  }
  return j.dump();
}

}  // namespace steer::sdp
