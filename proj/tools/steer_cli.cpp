// Command-line front end. Talks to the library only through steer.h.
//
// JSON goes to stdout (or --out), a short human-readable table to stderr.
// Exit codes: 0 ok, 1 input error, 2 solver degradation, 3 no advantage.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "steer/steer.h"

namespace {

using Json = nlohmann::ordered_json;

struct Config {
  double tol_gap = 1e-8;
  double tol_feas = 1e-8;
  int max_iter = 200;
  std::size_t strategy_cap = 0;  // 0: library default
  std::size_t pad = 1000;
  std::uint64_t seed = 0;
  std::string out;
  std::string measurements;
  int seesaw = 0;
  std::string first_path;
  std::string second_path;
  std::size_t d = 0;
};

int exit_code(steer_status s) {
  switch (s) {
    case STEER_OK: return 0;
    case STEER_ERR_SOLVER: return 2;
    case STEER_ERR_NO_ADVANTAGE: return 3;
    default: return 1;
  }
}

bool read_text(const std::string& path, std::string& text) {
  std::ifstream in(path);
  if (!in) return false;
  std::stringstream ss;
  ss << in.rdbuf();
  text = ss.str();
  return true;
}

std::string fmt(const Json& v) {
  if (v.is_null()) return "n/a";
  if (v.is_number_float()) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v.get<double>());
    return buf;
  }
  return v.dump();
}

void print_table(const std::string& command, const Json& j) {
  std::ostream& e = std::cerr;
  if (command == "robustness") {
    e << "steering robustness R   " << fmt(j["R"]) << "\n"
      << "primal value (1+R)      " << fmt(j["primal"]) << "\n"
      << "dual value (witness)    " << fmt(j["dual"]) << "\n"
      << "saturation gap          " << fmt(j["saturation_gap"]) << "\n"
      << "solver status           " << j["status"]["primal"].get<std::string>() << " / "
      << j["status"]["dual"].get<std::string>() << "\n";
  } else if (command == "steer-state") {
    e << "lower bound on R_steer  " << fmt(j["lower_bound"]) << "  (best: " << j["best"].get<std::string>()
      << ")\n"
      << "upper bound R_g         " << fmt(j["upper_bound"]) << "\n";
    for (const auto& c : j["candidates"]) {
      e << "  " << c["name"].get<std::string>() << ": ";
      if (c.contains("R"))
        e << "R = " << fmt(c["R"]) << "\n";
      else
        e << "failed: " << c["error"].get<std::string>() << "\n";
    }
    if (j.contains("seesaw"))
      e << "see-saw                 " << fmt(j["seesaw"]["start"]) << " -> " << fmt(j["seesaw"]["R"]) << "\n";
  } else if (command == "discriminate") {
    e << "p_corr one-way          " << fmt(j["p_oneway"]) << "\n"
      << "p_corr NE bracket       [" << fmt(j["p_ne"][0]) << ", " << fmt(j["p_ne"][1]) << "]\n"
      << "ratio bracket           [" << fmt(j["ratio"][0]) << ", " << fmt(j["ratio"][1]) << "]\n"
      << "1 + R                   " << fmt(Json(1.0 + j["R"].get<double>())) << "\n"
      << "alpha, N                " << fmt(j["alpha"]) << ", " << fmt(j["N"]) << "\n";
  } else if (command == "mub-bound") {
    e << "d                       " << fmt(j["d"]) << "\n"
      << "sqrt(d)(sqrt(d)-1)/(sqrt(d)+1)  " << fmt(j["analytic"]) << "\n"
      << "sqrt(d)-2               " << fmt(j["coarse"]) << "\n"
      << "SDP robustness          " << fmt(j["sdp"]) << "\n"
      << "verified                " << (j["verified"].get<bool>() ? "yes" : "no") << "\n";
    if (j.contains("note")) e << "note                    " << j["note"].get<std::string>() << "\n";
  }
}

struct ContextDeleter {
  void operator()(steer_context* c) const { steer_context_free(c); }
};

int run(const std::string& command, const Config& cfg) {
  std::unique_ptr<steer_context, ContextDeleter> ctx(steer_context_new());
  if (!ctx) {
    std::cerr << "error: cannot allocate context\n";
    return 1;
  }
  steer_status st = steer_set_tolerances(ctx.get(), cfg.tol_gap, cfg.tol_feas);
  if (st == STEER_OK) st = steer_set_max_iter(ctx.get(), cfg.max_iter);
  if (st == STEER_OK && cfg.strategy_cap > 0) st = steer_set_strategy_cap(ctx.get(), cfg.strategy_cap);
  if (st == STEER_OK) st = steer_set_seed(ctx.get(), cfg.seed);
  if (st != STEER_OK) {
    std::cerr << "error: " << steer_last_error(ctx.get()) << "\n";
    return 1;
  }

  std::string first;
  std::string second;
  if (!cfg.first_path.empty() && !read_text(cfg.first_path, first)) {
    std::cerr << "error: cannot read " << cfg.first_path << "\n";
    return 1;
  }
  if (!cfg.second_path.empty() && !read_text(cfg.second_path, second)) {
    std::cerr << "error: cannot read " << cfg.second_path << "\n";
    return 1;
  }

  char* out = nullptr;
  if (command == "robustness") {
    st = steer_robustness_json(ctx.get(), first.c_str(), &out);
  } else if (command == "steer-state") {
    const bool preset = cfg.measurements == "mub" || cfg.measurements == "paulis";
    std::string ma;
    if (!preset && !read_text(cfg.measurements, ma)) {
      std::cerr << "error: --measurements must be mub, paulis or a readable file: " << cfg.measurements << "\n";
      return 1;
    }
    st = steer_state_lower_bound_json(ctx.get(), first.c_str(), preset ? nullptr : ma.c_str(),
                                      preset ? cfg.measurements.c_str() : nullptr, cfg.seesaw, &out);
  } else if (command == "discriminate") {
    st = steer_discriminate_json(ctx.get(), first.c_str(), second.c_str(), cfg.pad, &out);
  } else if (command == "mub-bound") {
    st = steer_mub_bound_json(ctx.get(), cfg.d, &out);
  }

  if (out == nullptr) {
    std::cerr << "error (" << steer_status_string(st) << "): " << steer_last_error(ctx.get()) << "\n";
    return exit_code(st);
  }
  const std::string text = std::string(out) + "\n";
  steer_string_free(out);
  if (cfg.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(cfg.out);
    if (!f || !(f << text)) {
      std::cerr << "error: cannot write " << cfg.out << "\n";
      return 1;
    }
  }
  print_table(command, Json::parse(text));
  if (st != STEER_OK)
    std::cerr << "warning (" << steer_status_string(st) << "): " << steer_last_error(ctx.get()) << "\n";
  return exit_code(st);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Steering robustness, subchannel discrimination and MUB bounds"};
  app.require_subcommand(1);
  app.fallthrough();
  Config cfg;

  app.add_option("--tol-gap", cfg.tol_gap, "relative duality gap tolerance")->check(CLI::PositiveNumber);
  app.add_option("--tol-feas", cfg.tol_feas, "feasibility tolerance")->check(CLI::PositiveNumber);
  app.add_option("--max-iter", cfg.max_iter, "interior-point iteration cap")->check(CLI::PositiveNumber);
  app.add_option("--strategy-cap", cfg.strategy_cap,
                 "cap on deterministic strategies (also enables larger MUB verification)")
      ->check(CLI::PositiveNumber);
  app.add_option("--pad", cfg.pad, "padding N for the constructed instrument")->check(CLI::PositiveNumber);
  app.add_option("--seed", cfg.seed, "PRNG seed");
  app.add_option("--out", cfg.out, "write JSON here instead of stdout");

  auto* rob = app.add_subcommand("robustness", "steering robustness of an assemblage");
  rob->add_option("assemblage", cfg.first_path, "assemblage JSON")->required();

  auto* state = app.add_subcommand("steer-state", "certified lower bound on a state's steering robustness");
  state->add_option("state", cfg.first_path, "state JSON")->required();
  state->add_option("--measurements", cfg.measurements, "measurement JSON file, mub or paulis")->required();
  state->add_option("--seesaw", cfg.seesaw, "see-saw rounds")->check(CLI::NonNegativeNumber);

  auto* disc = app.add_subcommand("discriminate", "one-way subchannel discrimination advantage");
  disc->add_option("state", cfg.first_path, "state JSON")->required();
  disc->add_option("measurements", cfg.second_path, "measurement JSON")->required();

  auto* mub = app.add_subcommand("mub-bound", "MUB lower bound for the maximally entangled state");
  mub->add_option("d", cfg.d, "dimension")->required()->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }
  return run(app.get_subcommands().front()->get_name(), cfg);
}
