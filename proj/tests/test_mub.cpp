#include <doctest.h>

#include <cmath>
#include <complex>

#include "steer/error.hpp"
#include "steer/mub.hpp"
#include "steer/random.hpp"
#include "support.hpp"

using namespace steer;

namespace {

// Overlaps recomputed from scratch against the target grid.
double oracle_overlap_error(const MubFamily& fam) {
  const std::size_t d = fam.d;
  double worst = 0.0;
  for (std::size_t x = 0; x <= d; ++x)
    for (std::size_t y = 0; y <= d; ++y)
      for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = 0; b < d; ++b) {
          const double o = std::norm(fam.vector(a, x).dot(fam.vector(b, y)));
          const double target = x == y ? (a == b ? 1.0 : 0.0) : 1.0 / static_cast<double>(d);
          worst = std::max(worst, std::abs(o - target));
        }
  return worst;
}

// lambda_max of sum_x F_{f(x)|x} through the Schur oracle.
double strategy_norm(const OperatorGrid& w, const DeterministicStrategy& f) {
  HermitianOperator s = HermitianOperator::zero(w.front().front().dim());
  for (std::size_t x = 0; x < w.size(); ++x) s += w[x][f.outcome(x)];
  return testing::oracle_max_eigenvalue(s.matrix());
}

}  // namespace

TEST_CASE("primality") {
  CHECK_FALSE(is_prime(0));
  CHECK_FALSE(is_prime(1));
  CHECK(is_prime(2));
  CHECK(is_prime(7));
  CHECK_FALSE(is_prime(9));
  CHECK(is_prime(101));
}

TEST_CASE("MUB overlaps") {
  for (std::size_t d : {2u, 3u, 5u, 7u}) {
    const auto fam = build_mubs(d);
    REQUIRE(fam.bases.size() == d + 1);
    CHECK(oracle_overlap_error(fam) <= 1e-10);
    CHECK(mub_overlap_error(fam) <= 1e-10);
    CHECK(fam.basis(0).isApprox(ComplexMatrix::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d))));
  }
}

TEST_CASE("unsupported and oversized dimensions") {
  try {
    build_mubs(4);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Unsupported);
  }
  try {
    build_mubs(11);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Size);
  }
  CHECK(build_mubs(11, 11).bases.size() == 12);
  CHECK_THROWS_AS(build_mubs(1), Error);
}

TEST_CASE("MUB assemblage members") {
  for (std::size_t d : {2u, 3u}) {
    const auto a = mub_assemblage(build_mubs(d));
    CHECK(a.settings() == d + 1);
    CHECK(a.outcomes() == d);
    const double inv = 1.0 / static_cast<double>(d);
    for (std::size_t x = 0; x <= d; ++x)
      for (std::size_t o = 0; o < d; ++o) {
        const auto& m = a.member(o, x);
        CHECK(m.trace() == doctest::Approx(inv).epsilon(1e-12));
        CHECK(hs_inner(m, m) == doctest::Approx(inv * m.trace()).epsilon(1e-12));
      }
    CHECK((a.reduced().matrix() - inv * ComplexMatrix::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d))).norm() < 1e-12);
    // Matches the generic state route.
    const auto b = assemblage_from_state(maximally_entangled_state(d), mub_measurements(build_mubs(d)));
    for (std::size_t x = 0; x <= d; ++x)
      for (std::size_t o = 0; o < d; ++o) CHECK((a.member(o, x) - b.member(o, x)).matrix().norm() < 1e-12);
  }
}

TEST_CASE("spectrum identity and norm bound") {
  SUBCASE("d = 2, every strategy") {
    const auto fam = build_mubs(2);
    for (const auto& f : enumerate_strategies(2, 3)) {
      const auto c = spectrum_identity_check(fam, f);
      CHECK(c.ok);
      CHECK(c.mismatch <= 1e-8);
      CHECK(c.norm <= 1.0 + std::sqrt(2.0) + 1e-8);
    }
  }
  SUBCASE("d = 3, random strategies") {
    const auto fam = build_mubs(3);
    Rng rng(51);
    for (int k = 0; k < 20; ++k) {
      const auto c = spectrum_identity_check(fam, random_strategy(3, 4, rng));
      CHECK(c.ok);
      CHECK(c.norm <= 1.0 + std::sqrt(3.0) + 1e-8);
    }
  }
  SUBCASE("single setting is a projector") {
    for (std::size_t d : {2u, 3u, 5u}) {
      const auto c = spectrum_identity_check(build_mubs(d), DeterministicStrategy({d - 1}, d));
      CHECK(c.norm == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(c.mismatch <= 1e-8);
    }
  }
}

TEST_CASE("beta witness is feasible") {
  for (std::size_t d : {2u, 3u}) {
    const auto w = mub_beta_witness(build_mubs(d));
    for (const auto& f : enumerate_strategies(d, d + 1)) CHECK(strategy_norm(w, f) <= 1.0 + 1e-8);
    CHECK(witness_violation(w) <= 1e-8);
  }
  const auto w5 = mub_beta_witness(build_mubs(5));
  Rng rng(52);
  for (int k = 0; k < 50; ++k) CHECK(strategy_norm(w5, random_strategy(5, 6, rng)) <= 1.0 + 1e-8);
}

TEST_CASE("beta witness objective") {
  for (std::size_t d : {2u, 3u, 5u}) {
    const auto fam = build_mubs(d);
    const auto w = mub_beta_witness(fam);
    const auto a = mub_assemblage(fam);
    double value = 0.0;
    for (std::size_t x = 0; x <= d; ++x)
      for (std::size_t o = 0; o < d; ++o) value += hs_inner(w[x][o], a.member(o, x));
    const double sd = std::sqrt(static_cast<double>(d));
    CHECK(std::abs(value - static_cast<double>(d + 1) / (sd + 1.0)) <= 1e-10);
    CHECK(std::abs(value - (1.0 + mub_analytic_bound(d))) <= 1e-10);
    CHECK(witness_value(w, a) == doctest::Approx(value).epsilon(1e-12));
  }
}

TEST_CASE("analytic bounds") {
  CHECK(mub_analytic_bound(2) == doctest::Approx(0.24264).epsilon(1e-4));
  CHECK(mub_analytic_bound(3) == doctest::Approx(0.46410).epsilon(1e-4));
  CHECK(mub_coarse_bound(2) == doctest::Approx(std::sqrt(2.0) - 2.0));
  CHECK(mub_coarse_bound(9) == doctest::Approx(1.0));
  for (std::size_t d = 2; d < 40; ++d) CHECK(mub_analytic_bound(d) >= mub_coarse_bound(d));
}

TEST_CASE("bound reports") {
  SUBCASE("d = 2") {
    const auto r = mub_bound_report(2);
    REQUIRE(r.sdp.has_value());
    CHECK(r.verified);
    CHECK(*r.sdp >= 0.24264 - 1e-6);
    CHECK(*r.sdp >= r.analytic - 1e-6);
    CHECK(*r.sdp <= 1.0 + 1e-6);
    REQUIRE(r.norm_check_max.has_value());
    CHECK(*r.norm_check_max <= 1.0 + std::sqrt(2.0) + 1e-8);
  }
  SUBCASE("d = 3") {
    const auto r = mub_bound_report(3);
    REQUIRE(r.sdp.has_value());
    CHECK(r.verified);
    CHECK(*r.sdp >= 0.46410 - 1e-6);
    CHECK(*r.sdp <= 2.0 + 1e-6);
  }
  SUBCASE("d = 5 stays analytic under the default cap") {
    const auto r = mub_bound_report(5);
    CHECK_FALSE(r.sdp.has_value());
    CHECK_FALSE(r.verified);
    CHECK_FALSE(r.note.empty());
  }
  SUBCASE("d = 9 is analytic only") {
    const auto r = mub_bound_report(9);
    CHECK_FALSE(r.verified);
    CHECK_FALSE(r.sdp.has_value());
    CHECK(r.coarse == doctest::Approx(1.0));
    CHECK_FALSE(r.note.empty());
  }
}
