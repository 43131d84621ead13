#include "steer/steer.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <new>
#include <optional>
#include <string>
#include <vector>

#include "steer/discrimination.hpp"
#include "steer/error.hpp"
#include "steer/io.hpp"
#include "steer/mub.hpp"
#include "steer/robustness.hpp"

struct steer_context {
  steer::RobustnessOptions options;
  bool strategy_cap_set = false;
  std::uint64_t seed = 0;
  std::string last_error;
};

struct steer_assemblage {
  steer::Assemblage value;
};

namespace {

steer_status status_of(steer::ErrorKind k) {
  switch (k) {
    case steer::ErrorKind::Dimension:
    case steer::ErrorKind::Validation:
    case steer::ErrorKind::Parse:
      return STEER_ERR_INPUT;
    case steer::ErrorKind::Size:
      return STEER_ERR_SIZE;
    case steer::ErrorKind::Unsupported:
      return STEER_ERR_UNSUPPORTED;
    case steer::ErrorKind::Convergence:
      return STEER_ERR_SOLVER;
    case steer::ErrorKind::NoAdvantage:
      return STEER_ERR_NO_ADVANTAGE;
  }
  return STEER_ERR_INTERNAL;
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

std::string dump(const steer::io::Json& j) { return j.dump(2); }

// Runs f, mapping exceptions to status codes and recording the message.
template <class F>
steer_status guarded(steer_context* ctx, F&& f) {
  if (ctx == nullptr) return STEER_ERR_NULL_ARGUMENT;
  ctx->last_error.clear();
  try {
    return f();
  } catch (const steer::Error& e) {
    ctx->last_error = std::string(steer::to_string(e.kind())) + ": " + e.what();
    return status_of(e.kind());
  } catch (const std::bad_alloc&) {
    ctx->last_error = "out of memory";
    return STEER_ERR_INTERNAL;
  } catch (const std::exception& e) {
    ctx->last_error = std::string("internal error: ") + e.what();
    return STEER_ERR_INTERNAL;
  }
}

steer_status robustness_status(steer_context* ctx, const steer::SteeringReport& r) {
  if (r.optimal()) return STEER_OK;
  ctx->last_error = std::string("solver degraded: primal ") + steer::sdp::to_string(r.primal_status) +
                    ", dual " + steer::sdp::to_string(r.dual_status);
  return STEER_ERR_SOLVER;
}

std::vector<steer::NamedMeasurements> preset_candidates(const std::string& preset, std::size_t dim_a) {
  using namespace steer;
  std::vector<NamedMeasurements> out;
  if (preset == "mub") {
    out.push_back({"mub", mub_measurements(build_mubs(dim_a))});
  } else if (preset == "paulis") {
    if (dim_a != 2)
      fail(ErrorKind::Unsupported, "the paulis preset needs dA = 2, got dA = " + std::to_string(dim_a));
    const MubFamily fam = build_mubs(2);
    out.push_back({"paulis Z,X", MeasurementAssemblage({projective_measurement(fam.basis(0)),
                                                         projective_measurement(fam.basis(1))})});
    out.push_back({"paulis Z,X,Y", mub_measurements(fam)});
  } else {
    fail(ErrorKind::Validation, "unknown measurement preset '" + preset + "' (expected mub or paulis)");
  }
  return out;
}

}  // namespace

extern "C" {

const char* steer_version(void) { return "0.1.0"; }

const char* steer_status_string(steer_status status) {
  switch (status) {
    case STEER_OK: return "ok";
    case STEER_ERR_INPUT: return "input error";
    case STEER_ERR_SOLVER: return "solver degraded";
    case STEER_ERR_NO_ADVANTAGE: return "no advantage";
    case STEER_ERR_SIZE: return "size cap exceeded";
    case STEER_ERR_UNSUPPORTED: return "unsupported";
    case STEER_ERR_INTERNAL: return "internal error";
    case STEER_ERR_NULL_ARGUMENT: return "null argument";
  }
  return "unknown status";
}

steer_context* steer_context_new(void) { return new (std::nothrow) steer_context(); }

void steer_context_free(steer_context* ctx) { delete ctx; }

const char* steer_last_error(const steer_context* ctx) {
  return ctx == nullptr ? "null context" : ctx->last_error.c_str();
}

steer_status steer_set_tolerances(steer_context* ctx, double gap_tol, double feas_tol) {
  return guarded(ctx, [&] {
    if (!(gap_tol > 0.0) || !(feas_tol > 0.0) || !std::isfinite(gap_tol) || !std::isfinite(feas_tol))
      steer::fail(steer::ErrorKind::Validation, "tolerances must be positive");
    ctx->options.solver.gap_tol = gap_tol;
    ctx->options.solver.feas_tol = feas_tol;
    return STEER_OK;
  });
}

steer_status steer_set_max_iter(steer_context* ctx, int max_iter) {
  return guarded(ctx, [&] {
    if (max_iter < 1) steer::fail(steer::ErrorKind::Validation, "max_iter must be at least 1");
    ctx->options.solver.max_iter = max_iter;
    return STEER_OK;
  });
}

steer_status steer_set_strategy_cap(steer_context* ctx, size_t cap) {
  return guarded(ctx, [&] {
    if (cap < 1) steer::fail(steer::ErrorKind::Validation, "strategy cap must be at least 1");
    ctx->options.strategy_cap = cap;
    ctx->strategy_cap_set = true;
    return STEER_OK;
  });
}

steer_status steer_set_seed(steer_context* ctx, uint64_t seed) {
  return guarded(ctx, [&] {
    ctx->seed = seed;
    return STEER_OK;
  });
}

steer_status steer_assemblage_from_json(steer_context* ctx, const char* json, steer_assemblage** out) {
  return guarded(ctx, [&] {
    if (json == nullptr || out == nullptr) return STEER_ERR_NULL_ARGUMENT;
    *out = nullptr;
    auto a = steer::io::assemblage_from_json(steer::io::parse(json, "assemblage"));
    *out = new steer_assemblage{std::move(a)};
    return STEER_OK;
  });
}

void steer_assemblage_free(steer_assemblage* a) { delete a; }

size_t steer_assemblage_settings(const steer_assemblage* a) { return a ? a->value.settings() : 0; }
size_t steer_assemblage_outcomes(const steer_assemblage* a) { return a ? a->value.outcomes() : 0; }
size_t steer_assemblage_dim(const steer_assemblage* a) { return a ? a->value.dim() : 0; }

steer_status steer_robustness(steer_context* ctx, const steer_assemblage* a, double* robustness,
                              char** report_json) {
  return guarded(ctx, [&] {
    if (a == nullptr) return STEER_ERR_NULL_ARGUMENT;
    const auto r = steer::steering_robustness(a->value, ctx->options);
    if (robustness != nullptr) *robustness = r.robustness;
    if (report_json != nullptr) *report_json = copy_string(dump(steer::io::report_to_json(r, ctx->seed)));
    return robustness_status(ctx, r);
  });
}

steer_status steer_robustness_json(steer_context* ctx, const char* assemblage_json, char** report_json) {
  return guarded(ctx, [&] {
    if (assemblage_json == nullptr || report_json == nullptr) return STEER_ERR_NULL_ARGUMENT;
    *report_json = nullptr;
    const auto a = steer::io::assemblage_from_json(steer::io::parse(assemblage_json, "assemblage"));
    const auto r = steer::steering_robustness(a, ctx->options);
    *report_json = copy_string(dump(steer::io::report_to_json(r, ctx->seed)));
    return robustness_status(ctx, r);
  });
}

steer_status steer_state_lower_bound_json(steer_context* ctx, const char* state_json,
                                          const char* measurements_json, const char* preset,
                                          int seesaw_rounds, char** report_json) {
  return guarded(ctx, [&] {
    if (state_json == nullptr || report_json == nullptr) return STEER_ERR_NULL_ARGUMENT;
    *report_json = nullptr;
    if ((measurements_json == nullptr) == (preset == nullptr))
      steer::fail(steer::ErrorKind::Validation, "give exactly one of a measurement file and a preset");
    if (seesaw_rounds < 0) steer::fail(steer::ErrorKind::Validation, "see-saw rounds must be >= 0");
    const auto state = steer::io::state_from_json(steer::io::parse(state_json, "state"));
    std::vector<steer::NamedMeasurements> candidates;
    if (measurements_json != nullptr) {
      candidates.push_back(
          {"file", steer::io::measurements_from_json(steer::io::parse(measurements_json, "measurements"))});
    } else {
      candidates = preset_candidates(preset, state.dim_a());
    }
    auto report = steer::state_steering_lower_bound(state, candidates, ctx->options);
    std::optional<steer::io::SeesawSummary> summary;
    if (seesaw_rounds > 0) {
      const std::size_t start_index = report.best_index;
      const auto& start = report.candidates[start_index];
      const auto s = steer::seesaw_improve(state, start.measurements, seesaw_rounds, ctx->options);
      summary = steer::io::SeesawSummary{seesaw_rounds, start.report->robustness, s.robustness, s.history};
      if (s.robustness > report.lower_bound) {
        steer::CandidateResult cr{"seesaw from " + start.name, s.measurements, std::nullopt, {}};
        cr.report = steer::steering_robustness(steer::assemblage_from_state(state, s.measurements),
                                               ctx->options);
        report.lower_bound = cr.report->robustness;
        report.best_index = report.candidates.size();
        report.candidates.push_back(std::move(cr));
      }
    }
    *report_json = copy_string(dump(steer::io::state_report_to_json(report, ctx->seed, summary)));
    if (report.partial) {
      ctx->last_error = "some candidates failed or did not reach tolerance";
      return STEER_ERR_SOLVER;
    }
    return STEER_OK;
  });
}

steer_status steer_discriminate_json(steer_context* ctx, const char* state_json,
                                     const char* measurements_json, size_t padding, char** report_json) {
  return guarded(ctx, [&] {
    if (state_json == nullptr || measurements_json == nullptr || report_json == nullptr)
      return STEER_ERR_NULL_ARGUMENT;
    *report_json = nullptr;
    if (padding < 1) steer::fail(steer::ErrorKind::Validation, "padding N must be at least 1");
    const auto state = steer::io::state_from_json(steer::io::parse(state_json, "state"));
    const auto ma = steer::io::measurements_from_json(steer::io::parse(measurements_json, "measurements"));
    const auto r = steer::advantage_ratio(state, ma, padding, ctx->seed, ctx->options);
    *report_json = copy_string(dump(steer::io::discrimination_to_json(r)));
    return robustness_status(ctx, r.report);
  });
}

steer_status steer_mub_bound_json(steer_context* ctx, size_t d, char** report_json) {
  return guarded(ctx, [&] {
    if (report_json == nullptr) return STEER_ERR_NULL_ARGUMENT;
    *report_json = nullptr;
    if (d < 2) steer::fail(steer::ErrorKind::Validation, "d must be at least 2");
    steer::MubOptions opt;
    opt.robustness = ctx->options;
    opt.seed = ctx->seed;
    if (ctx->strategy_cap_set) opt.verification_cap = ctx->options.strategy_cap;
    const auto r = steer::mub_bound_report(d, opt);
    *report_json = copy_string(dump(steer::io::mub_report_to_json(r, ctx->seed)));
    return STEER_OK;
  });
}

steer_status steer_pure_state_generalized_robustness(steer_context* ctx, const double* schmidt, size_t n,
                                                     double* out) {
  return guarded(ctx, [&] {
    if (schmidt == nullptr || out == nullptr) return STEER_ERR_NULL_ARGUMENT;
    *out = steer::pure_state_generalized_robustness(std::span<const double>(schmidt, n));
    return STEER_OK;
  });
}

void steer_string_free(char* s) { std::free(s); }

}  // extern "C"
