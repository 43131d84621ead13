#include <doctest.h>

#include <cmath>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>

#include <json.hpp>

#include "steer/steer.h"

namespace {

using Json = nlohmann::json;

std::string fixture(const std::string& name) {
  std::ifstream in(std::string(STEER_FIXTURES_DIR) + "/" + name);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Context {
  steer_context* ptr = steer_context_new();
  ~Context() { steer_context_free(ptr); }
  operator steer_context*() const { return ptr; }
};

// Takes ownership of a returned report.
Json take(char* s) {
  REQUIRE(s != nullptr);
  const auto j = Json::parse(s);
  steer_string_free(s);
  return j;
}

std::string last_error(const Context& c) { return steer_last_error(c); }

}  // namespace

TEST_CASE("version and status strings") {
  CHECK(std::string(steer_version()).size() > 0);
  CHECK(std::string(steer_status_string(STEER_OK)).size() > 0);
  CHECK(std::string(steer_status_string(STEER_ERR_NO_ADVANTAGE)).size() > 0);
  CHECK(std::string(steer_status_string(static_cast<steer_status>(99))).size() > 0);
}

TEST_CASE("null arguments") {
  Context c;
  char* out = nullptr;
  CHECK(steer_robustness_json(nullptr, "{}", &out) == STEER_ERR_NULL_ARGUMENT);
  CHECK(steer_robustness_json(c, nullptr, &out) == STEER_ERR_NULL_ARGUMENT);
  CHECK(steer_robustness(c, nullptr, nullptr, nullptr) == STEER_ERR_NULL_ARGUMENT);
  CHECK(steer_mub_bound_json(c, 2, nullptr) == STEER_ERR_NULL_ARGUMENT);
  CHECK(steer_assemblage_settings(nullptr) == 0);
  steer_assemblage_free(nullptr);
  steer_context_free(nullptr);
  steer_string_free(nullptr);
}

TEST_CASE("settings are validated") {
  Context c;
  CHECK(steer_set_tolerances(c, 0.0, 1e-8) == STEER_ERR_INPUT);
  CHECK(steer_set_tolerances(c, 1e-9, NAN) == STEER_ERR_INPUT);
  CHECK(steer_set_tolerances(c, 1e-9, 1e-9) == STEER_OK);
  CHECK(steer_set_max_iter(c, 0) == STEER_ERR_INPUT);
  CHECK(steer_set_seed(c, 12) == STEER_OK);
}

TEST_CASE("assemblage handle") {
  Context c;
  steer_assemblage* a = nullptr;
  REQUIRE(steer_assemblage_from_json(c, fixture("mub_d2_assemblage.json").c_str(), &a) == STEER_OK);
  CHECK(steer_assemblage_settings(a) == 3);
  CHECK(steer_assemblage_outcomes(a) == 2);
  CHECK(steer_assemblage_dim(a) == 2);
  double r = -1.0;
  char* out = nullptr;
  CHECK(steer_robustness(c, a, &r, &out) == STEER_OK);
  const auto j = take(out);
  CHECK(r >= 0.24264 - 1e-6);
  CHECK(r <= 1.0 + 1e-6);
  CHECK(j["R"].get<double>() == r);
  CHECK(std::abs(j["primal"].get<double>() - j["dual"].get<double>()) <= 1e-6 * (1.0 + r));
  // Robustness without a report.
  double r2 = -1.0;
  CHECK(steer_robustness(c, a, &r2, nullptr) == STEER_OK);
  CHECK(r2 == r);
  steer_assemblage_free(a);

  steer_assemblage* bad = nullptr;
  CHECK(steer_assemblage_from_json(c, "{\"settings\": 2", &bad) == STEER_ERR_INPUT);
  CHECK(bad == nullptr);
  CHECK(last_error(c).find("parse") != std::string::npos);
}

TEST_CASE("robustness from JSON") {
  Context c;
  char* out = nullptr;
  CHECK(steer_robustness_json(c, fixture("unsteerable_assemblage.json").c_str(), &out) == STEER_OK);
  CHECK(take(out)["R"].get<double>() <= 1e-7);
  CHECK(last_error(c).empty());

  CHECK(steer_robustness_json(c, fixture("nonhermitian_assemblage.json").c_str(), &out) == STEER_ERR_INPUT);
  CHECK(out == nullptr);
  CHECK(last_error(c).find("(a=2, x=1)") != std::string::npos);

  REQUIRE(steer_set_strategy_cap(c, 10) == STEER_OK);
  CHECK(steer_robustness_json(c, fixture("mub_d3_assemblage.json").c_str(), &out) == STEER_ERR_SIZE);
  CHECK(last_error(c).find("3^4") != std::string::npos);

  Context slow;
  REQUIRE(steer_set_max_iter(slow, 2) == STEER_OK);
  CHECK(steer_robustness_json(slow, fixture("mub_d2_assemblage.json").c_str(), &out) == STEER_ERR_SOLVER);
  // Degraded results still come with a report.
  const auto j = take(out);
  CHECK(j["status"]["primal"] != "optimal");
}

TEST_CASE("state lower bound") {
  Context c;
  char* out = nullptr;
  const auto bell = fixture("bell_state.json");
  CHECK(steer_state_lower_bound_json(c, bell.c_str(), nullptr, "mub", 0, &out) == STEER_OK);
  CHECK(take(out)["lower_bound"].get<double>() >= 0.24264 - 1e-6);

  CHECK(steer_state_lower_bound_json(c, bell.c_str(), fixture("pauli_zx.json").c_str(), nullptr, 0, &out) == STEER_OK);
  const double zx = take(out)["lower_bound"].get<double>();
  CHECK(std::abs(zx - (3.0 - 2.0 * std::sqrt(2.0))) < 1e-6);

  CHECK(steer_state_lower_bound_json(c, bell.c_str(), nullptr, "paulis", 3, &out) == STEER_OK);
  CHECK(take(out)["lower_bound"].get<double>() >= zx - 1e-8);

  CHECK(steer_state_lower_bound_json(c, fixture("separable_state.json").c_str(), nullptr, "paulis", 0, &out) == STEER_OK);
  CHECK(take(out)["lower_bound"].get<double>() <= 1e-7);

  CHECK(steer_state_lower_bound_json(c, bell.c_str(), nullptr, nullptr, 0, &out) == STEER_ERR_INPUT);
  CHECK(steer_state_lower_bound_json(c, bell.c_str(), "{}", "mub", 0, &out) == STEER_ERR_INPUT);
  CHECK(steer_state_lower_bound_json(c, bell.c_str(), nullptr, "sic", 0, &out) == STEER_ERR_INPUT);
}

TEST_CASE("discrimination") {
  Context c;
  char* out = nullptr;
  const auto bell = fixture("bell_state.json");
  const auto zx = fixture("pauli_zx.json");
  CHECK(steer_discriminate_json(c, bell.c_str(), zx.c_str(), 10000, &out) == STEER_OK);
  const auto j = take(out);
  const double r = j["R"].get<double>();
  CHECK(std::abs(j["ratio"][0].get<double>() - (1.0 + r)) < 1e-3);
  CHECK(j["N"] == 10000);

  CHECK(steer_discriminate_json(c, fixture("separable_state.json").c_str(), zx.c_str(), 100, &out) ==
        STEER_ERR_NO_ADVANTAGE);
  CHECK(out == nullptr);
  CHECK(last_error(c).find("unsteerable") != std::string::npos);
  CHECK(steer_discriminate_json(c, bell.c_str(), zx.c_str(), 0, &out) == STEER_ERR_INPUT);
}

TEST_CASE("MUB bound and generalized robustness") {
  Context c;
  char* out = nullptr;
  CHECK(steer_mub_bound_json(c, 2, &out) == STEER_OK);
  const auto j2 = take(out);
  CHECK(j2["verified"] == true);
  CHECK(j2["sdp"].get<double>() >= 0.24264 - 1e-6);
  CHECK(steer_mub_bound_json(c, 9, &out) == STEER_OK);
  const auto j9 = take(out);
  CHECK(j9["verified"] == false);
  CHECK(j9["sdp"].is_null());
  CHECK(steer_mub_bound_json(c, 1, &out) == STEER_ERR_INPUT);

  const double p[] = {0.9, 0.1};
  double g = 0.0;
  CHECK(steer_pure_state_generalized_robustness(c, p, 2, &g) == STEER_OK);
  CHECK(g == doctest::Approx(0.6).epsilon(1e-14));
  const double bad[] = {0.9, 0.2};
  CHECK(steer_pure_state_generalized_robustness(c, bad, 2, &g) == STEER_ERR_INPUT);
}
