// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "steer/discrimination.hpp"
#include "steer/error.hpp"
#include "steer/mub.hpp"
#include "steer/random.hpp"
#include "steer/robustness.hpp"
#include "steer/sdp.hpp"
#include "support.hpp"

using namespace steer;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* name, double limit_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool in_time = limit_s <= 0.0 || secs <= limit_s;
  const bool pass = o.pass && in_time;
  if (!pass) ++failures;
  char timing[96];
  if (limit_s > 0.0)
    std::snprintf(timing, sizeof timing, "%.2f s (limit %.0f s)", secs, limit_s);
  else
    std::snprintf(timing, sizeof timing, "%.3f s", secs);
  std::printf("%s [%d] %s: %s; %s\n", pass ? "PASS" : "FAIL", id, name, o.detail.c_str(), timing);
  std::fflush(stdout);
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

MeasurementAssemblage pauli_zx() {
  const auto fam = build_mubs(2);
  return MeasurementAssemblage({projective_measurement(fam.basis(0)), projective_measurement(fam.basis(1))});
}

// Classical-quantum realisation of an LHS model: ancilla |l> carries the
// hidden variable, M_{a|x} = sum_l D(a|x,l) |l><l|, rho = sum_l p_l |l><l| (x) sigma_l.
struct LhsRealisation {
  BipartiteState state;
  MeasurementAssemblage measurements;
};

LhsRealisation random_lhs_realisation(Rng& rng, std::size_t d, std::size_t na, std::size_t nx) {
  const auto strategies = enumerate_strategies(na, nx);
  const std::size_t nl = strategies.size();
  std::vector<double> w(nl);
  double total = 0.0;
  for (auto& v : w) total += (v = 0.05 + rng.uniform());
  HermitianOperator rho = HermitianOperator::zero(nl * d);
  for (std::size_t l = 0; l < nl; ++l) {
    ComplexVector e = ComplexVector::Zero(static_cast<Eigen::Index>(nl));
    e(static_cast<Eigen::Index>(l)) = 1.0;
    const auto sigma = random_mixed_state(d, 1 + rng.index(d), rng);
    rho += (w[l] / total) * kron(HermitianOperator::projector(e), sigma.op());
  }
  std::vector<Povm> povms;
  for (std::size_t x = 0; x < nx; ++x) {
    std::vector<HermitianOperator> el(na, HermitianOperator::zero(nl));
    for (std::size_t l = 0; l < nl; ++l) {
      ComplexVector e = ComplexVector::Zero(static_cast<Eigen::Index>(nl));
      e(static_cast<Eigen::Index>(l)) = 1.0;
      el[strategies[l].outcome(x)] += HermitianOperator::projector(e);
    }
    povms.emplace_back(std::move(el));
  }
  return {BipartiteState(QuantumState((1.0 / rho.trace()) * rho), nl, d), MeasurementAssemblage(std::move(povms))};
}

sdp::SdpProblem lp(const std::vector<double>& c, const std::vector<std::vector<double>>& a,
                   const std::vector<double>& b) {
  sdp::SdpProblem p;
  p.block_dims.assign(c.size(), 1);
  for (double v : c) p.objective.push_back(sdp::Matrix::Constant(1, 1, v));
  for (std::size_t i = 0; i < a.size(); ++i) {
    sdp::Constraint con;
    for (std::size_t j = 0; j < c.size(); ++j)
      if (a[i][j] != 0.0) con.terms.push_back({j, sdp::Matrix::Constant(1, 1, a[i][j])});
    con.rhs = b[i];
    p.constraints.push_back(std::move(con));
  }
  return p;
}

}  // namespace

int main() {
  criterion(1, "strong duality on 50 random assemblages", 60.0, [] {
    Rng rng(1001);
    int ok = 0;
    double worst = 0.0;
    for (int k = 0; k < 50; ++k) {
      const std::size_t d = 2 + rng.index(2);
      const std::size_t na = 2 + rng.index(2);
      const std::size_t nx = 2 + rng.index(2);
      const auto a = testing::random_assemblage(rng, d, na, nx);
      const auto r = steering_robustness(a);
      const double gap = std::abs(r.primal_value - r.dual_value) / (1.0 + r.primal_value);
      worst = std::max(worst, gap);
      if (gap <= 1e-6) ++ok;
    }
    return Outcome{ok == 50, fmt("%.0f/50 within 1e-6 relative, worst %.2e", ok, worst)};
  });

  criterion(2, "unsteerable inputs give no one-way advantage", 30.0, [] {
    Rng rng(1002);
    int ok = 0;
    double worst_r = 0.0;
    double worst_excess = -std::numeric_limits<double>::infinity();
    double worst_canon = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < 15; ++k) {
      const std::size_t d = 2 + rng.index(2);
      const std::size_t nx = 2 + rng.index(2);
      const auto lhs = random_lhs_realisation(rng, d, 2, nx);
      const auto r = steering_robustness(assemblage_from_state(lhs.state, lhs.measurements));
      worst_r = std::max(worst_r, r.robustness);
      const auto c = build_instrument(r, 20, static_cast<std::uint64_t>(k));
      const double high = pcorr_ne_bracket(c).high;
      bool good = r.robustness <= 1e-7;
      // The canonical strategy sits at the optimum of the entangled bracket.
      const double canon = pcorr_oneway(c.instrument, canonical_strategy(c, lhs.measurements), lhs.state) - high;
      worst_canon = std::max(worst_canon, canon);
      good = good && canon <= 1e-6;
      for (int s = 0; s < 20; ++s) {
        const auto strat = testing::random_one_way(rng, c.output_dim(), lhs.state.dim_a(), c.instrument.size(),
                                                   2 + rng.index(4));
        const double excess = pcorr_oneway(c.instrument, strat, lhs.state) - high;
        worst_excess = std::max(worst_excess, excess);
        good = good && excess <= 1e-6;
      }
      if (good) ++ok;
    }
    return Outcome{ok == 15, fmt("%.0f/15 assemblages, max R %.2e, max p_oneway - p_ne_high: random %.3e", ok,
                                 worst_r, worst_excess) +
                                 fmt(", canonical %.3e", worst_canon)};
  });

  criterion(3, "MUB bounds d = 2, 3", 120.0, [] {
    const auto r2 = mub_bound_report(2);
    const auto r3 = mub_bound_report(3);
    if (!r2.sdp || !r3.sdp) return Outcome{false, "SDP value missing"};
    const bool ok2 = *r2.sdp >= 0.24264 - 1e-6 && *r2.sdp <= 1.0 + 1e-6;
    const bool ok3 = *r3.sdp >= 0.46410 - 1e-6 && *r3.sdp <= 2.0 + 1e-6;
    return Outcome{ok2 && ok3 && r2.verified && r3.verified,
                   fmt("d=2 R = %.6f (bound %.5f), d=3 R = %.6f", *r2.sdp, r2.analytic, *r3.sdp) +
                       fmt(" (bound %.5f)", r3.analytic)};
  });

  criterion(4, "advantage ratio, Bell state with Z and X, N = 1e4", 10.0, [] {
    const double n = 10000.0;
    const auto res = advantage_ratio(maximally_entangled_state(2), pauli_zx(), 10000, 0);
    const double target = 1.0 + res.robustness;
    const double lo = target / (1.0 + 2.0 / (res.alpha * n)) - 1e-6;
    const bool ok = res.ratio_low >= lo && res.ratio_low <= target + 1e-6 &&
                    std::abs(res.ratio_low - target) < 1e-3;
    return Outcome{ok, fmt("ratio_low %.6f, 1 + R = %.6f, lower limit %.6f", res.ratio_low, target, lo)};
  });

  criterion(5, "saturation at the dual optimum, 10 steerable fixtures", 0.0, [] {
    std::vector<Assemblage> fixtures;
    fixtures.push_back(assemblage_from_state(maximally_entangled_state(2), pauli_zx()));
    fixtures.push_back(mub_assemblage(build_mubs(2)));
    fixtures.push_back(mub_assemblage(build_mubs(3)));
    const double p[] = {0.9, 0.1};
    fixtures.push_back(assemblage_from_state(schmidt_state(p), pauli_zx()));
    Rng rng(1005);
    while (fixtures.size() < 10) {
      const std::size_t d = 2 + rng.index(2);
      fixtures.push_back(assemblage_from_state(testing::random_pure_state(d, d, rng),
                                               testing::random_projective(d, 2 + rng.index(2), rng)));
    }
    int ok = 0;
    double worst = 0.0;
    double min_r = std::numeric_limits<double>::infinity();
    for (const auto& a : fixtures) {
      const auto r = steering_robustness(a);
      const double g = check_saturation(r);
      worst = std::max(worst, g);
      min_r = std::min(min_r, r.robustness);
      if (r.robustness > 1e-6 && g <= 1e-5) ++ok;
    }
    return Outcome{ok == 10, fmt("%.0f/10, worst gap %.2e, smallest R %.3e", ok, worst, min_r)};
  });

  criterion(6, "MUB spectrum identity and norm bound", 10.0, [] {
    int ok = 0;
    int total = 0;
    double worst_mismatch = 0.0;
    const auto f2 = build_mubs(2);
    for (const auto& f : enumerate_strategies(2, 3)) {
      const auto c = spectrum_identity_check(f2, f);
      ++total;
      worst_mismatch = std::max(worst_mismatch, c.mismatch);
      if (c.mismatch <= 1e-8 && c.norm <= 1.0 + std::sqrt(2.0) + 1e-8) ++ok;
    }
    const auto f3 = build_mubs(3);
    Rng rng(1006);
    for (int k = 0; k < 50; ++k) {
      const auto c = spectrum_identity_check(f3, random_strategy(3, 4, rng));
      ++total;
      worst_mismatch = std::max(worst_mismatch, c.mismatch);
      if (c.mismatch <= 1e-8 && c.norm <= 1.0 + std::sqrt(3.0) + 1e-8) ++ok;
    }
    return Outcome{ok == total, fmt("%.0f/%.0f strategies, worst mismatch %.2e", ok, total, worst_mismatch)};
  });

  criterion(7, "pure-state generalized robustness formula", 0.0, [] {
    // "Exactly" means within a few ulps: 0.6 itself is not a double.
    constexpr double ulps = 4.0 * std::numeric_limits<double>::epsilon();
    const double p[] = {0.9, 0.1};
    const double v = pure_state_generalized_robustness(p);
    bool ok = std::abs(v - 0.6) <= ulps * 0.6;
    double worst = 0.0;
    for (std::size_t d = 2; d <= 10; ++d) {
      const std::vector<double> u(d, 1.0 / static_cast<double>(d));
      const double e = static_cast<double>(d) - 1.0;
      const double rel = std::abs(pure_state_generalized_robustness(u) - e) / e;
      worst = std::max(worst, rel);
      ok = ok && rel <= ulps;
    }
    return Outcome{ok, fmt("(0.9, 0.1) -> %.17g, uniform d = 2..10 worst relative error %.1e", v, worst)};
  });

  criterion(8, "SDP engine soundness", 60.0, [] {
    Rng rng(1008);
    int ok = 0;
    double worst = 0.0;
    for (int k = 0; k < 50; ++k) {
      std::vector<std::size_t> dims;
      const std::size_t blocks = 1 + rng.index(3);
      for (std::size_t b = 0; b < blocks; ++b) dims.push_back(1 + rng.index(4));
      std::size_t free_dims = 0;
      for (auto n : dims) free_dims += n * (n + 1) / 2;
      const auto prob = testing::random_feasible_sdp(rng, dims, 1 + rng.index(std::min<std::size_t>(6, free_dims)));
      const auto s = sdp::solve(prob);
      worst = std::max(worst, s.residuals.relative_gap);
      if (s.status == sdp::SolveStatus::Optimal && s.residuals.relative_gap <= 1e-8) ++ok;
    }
    struct Case {
      sdp::SdpProblem p;
      double value;
    };
    std::vector<Case> cases;
    cases.push_back({lp({1, 2, 3}, {{1, 1, 1}}, {1}), 1.0});
    cases.push_back({lp({-1, -1, 0, 0}, {{1, 2, 1, 0}, {1, 0, 0, 1}}, {4, 3}), -3.5});
    cases.push_back({lp({2, 3}, {{1, 1}}, {5}), 10.0});
    cases.push_back({lp({1, 0, 0}, {{1, -1, 0}, {0, 1, 1}}, {0, 1}), 0.0});
    sdp::SolveOptions tight;
    tight.gap_tol = 1e-11;
    tight.feas_tol = 1e-11;
    int lp_ok = 0;
    double lp_worst = 0.0;
    for (const auto& c : cases) {
      const auto s = sdp::solve(c.p, tight);
      const double err = std::abs(s.primal_value - c.value) / (1.0 + std::abs(c.value));
      lp_worst = std::max(lp_worst, err);
      if (s.status == sdp::SolveStatus::Optimal && err <= 1e-9) ++lp_ok;
    }
    return Outcome{ok == 50 && lp_ok == 4,
                   fmt("%.0f/50 random SDPs (worst gap %.2e), ", ok, worst) +
                       fmt("%.0f/4 LPs exact to %.1e", lp_ok, lp_worst)};
  });

  criterion(9, "two-path one-way success probability", 10.0, [] {
    Rng rng(1009);
    int ok = 0;
    double worst = 0.0;
    for (int k = 0; k < 30; ++k) {
      const std::size_t din = 2 + rng.index(2);
      const std::size_t dout = 2 + rng.index(3);
      const std::size_t da = 2 + rng.index(2);
      const std::size_t branches = 2 + rng.index(3);
      const auto inst = random_instrument(din, dout, branches, 1 + rng.index(2), rng);
      const BipartiteState rho(random_mixed_state(da * din, 1 + rng.index(3), rng), da, din);
      const auto strat = testing::random_one_way(rng, dout, da, branches, 2 + rng.index(3));
      const double diff = std::abs(pcorr_oneway(inst, strat, rho) - pcorr_oneway_global(inst, strat, rho));
      worst = std::max(worst, diff);
      if (diff <= 1e-10) ++ok;
    }
    return Outcome{ok == 30, fmt("%.0f/30 triples, worst difference %.2e", ok, worst)};
  });

  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
