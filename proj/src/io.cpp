#include "steer/io.hpp"

#include <fstream>
#include <sstream>

#include "steer/error.hpp"

namespace steer::io {
namespace {

std::string label(std::size_t a, std::size_t x) {
  return "(a=" + std::to_string(a + 1) + ", x=" + std::to_string(x + 1) + ")";
}

const Json& field(const Json& j, const char* name, const std::string& where) {
  if (!j.is_object()) fail(ErrorKind::Parse, where + ": expected an object");
  const auto it = j.find(name);
  if (it == j.end()) fail(ErrorKind::Parse, where + ": missing field \"" + name + "\"");
  return *it;
}

std::size_t count_field(const Json& j, const char* name, const std::string& where) {
  const Json& v = field(j, name, where);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
    fail(ErrorKind::Parse, where + ": \"" + name + "\" must be a non-negative integer");
  return v.get<std::size_t>();
}

const Json& array_field(const Json& j, const char* name, const std::string& where,
                        std::optional<std::size_t> size = std::nullopt) {
  const Json& v = field(j, name, where);
  if (!v.is_array()) fail(ErrorKind::Parse, where + ": \"" + name + "\" must be an array");
  if (size && v.size() != *size)
    fail(ErrorKind::Parse, where + ": \"" + name + "\" has " + std::to_string(v.size()) +
                               " entries, expected " + std::to_string(*size));
  return v;
}

// Parses a [x][a] grid of Hermitian operators.
std::vector<std::vector<HermitianOperator>> grid_from_json(const Json& j, const char* name,
                                                           const std::string& what) {
  const std::size_t nx = count_field(j, "settings", what);
  const std::size_t na = count_field(j, "outcomes", what);
  if (nx == 0 || na == 0) fail(ErrorKind::Parse, what + ": settings and outcomes must be positive");
  const Json& rows = array_field(j, name, what, nx);
  std::vector<std::vector<HermitianOperator>> out(nx);
  for (std::size_t x = 0; x < nx; ++x) {
    const std::string wx = what + " setting x=" + std::to_string(x + 1);
    if (!rows[x].is_array() || rows[x].size() != na)
      fail(ErrorKind::Parse, wx + ": expected " + std::to_string(na) + " operators");
    for (std::size_t a = 0; a < na; ++a)
      out[x].push_back(operator_from_json(rows[x][a], what + " " + label(a, x)));
  }
  return out;
}

template <class F>
auto relabel_errors(const std::string& prefix, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Parse) throw;
    throw Error(e.kind(), prefix + ": " + e.what());
  }
}

Json status_to_json(const SteeringReport& r) {
  Json s;
  s["primal"] = sdp::to_string(r.primal_status);
  s["dual"] = sdp::to_string(r.dual_status);
  return s;
}

Json residuals_to_json(const sdp::Residuals& r) {
  Json j;
  j["primal_infeasibility"] = r.primal_infeasibility;
  j["dual_infeasibility"] = r.dual_infeasibility;
  j["relative_gap"] = r.relative_gap;
  return j;
}

Json strategy_to_json(const DeterministicStrategy& s) {
  Json j = Json::array();
  for (std::size_t v : s.assignment()) j.push_back(v + 1);
  return j;
}

void require(bool cond, const std::string& msg) {
  if (!cond) fail(ErrorKind::Parse, msg);
}

void require_number(const Json& j, const char* name, const std::string& where) {
  require(field(j, name, where).is_number(), where + ": \"" + name + "\" must be a number");
}

void require_number_or_null(const Json& j, const char* name, const std::string& where) {
  const Json& v = field(j, name, where);
  require(v.is_number() || v.is_null(), where + ": \"" + name + "\" must be a number or null");
}

void require_matrix(const Json& j, const std::string& where) { (void)matrix_from_json(j, where); }

}  // namespace

Json parse(const std::string& text, const std::string& what) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::Parse, what + ": " + e.what());
  }
}

Json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Parse, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path);
}

Json matrix_to_json(const ComplexMatrix& m) {
  Json j;
  j["rows"] = m.rows();
  j["cols"] = m.cols();
  Json data = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) data.push_back({m(r, c).real(), m(r, c).imag()});
  j["data"] = std::move(data);
  return j;
}

ComplexMatrix matrix_from_json(const Json& j, const std::string& where) {
  const std::size_t rows = count_field(j, "rows", where);
  const std::size_t cols = count_field(j, "cols", where);
  const Json& data = array_field(j, "data", where, rows * cols);
  ComplexMatrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t k = 0; k < data.size(); ++k) {
    const Json& e = data[k];
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
      fail(ErrorKind::Parse, where + ": data entry " + std::to_string(k) + " must be [re, im]");
    m(static_cast<Eigen::Index>(k / cols), static_cast<Eigen::Index>(k % cols)) =
        Complex(e[0].get<double>(), e[1].get<double>());
  }
  return m;
}

HermitianOperator operator_from_json(const Json& j, const std::string& where) {
  const ComplexMatrix m = matrix_from_json(j, where);
  return relabel_errors(where, [&] { return HermitianOperator(m); });
}

Json state_to_json(const BipartiteState& s) {
  Json j;
  j["dims"] = {s.dim_a(), s.dim_b()};
  j["matrix"] = matrix_to_json(s.op().matrix());
  return j;
}

BipartiteState state_from_json(const Json& j) {
  const Json& dims = array_field(j, "dims", "state", 2);
  require(dims[0].is_number_unsigned() && dims[1].is_number_unsigned(),
          "state: \"dims\" must hold two positive integers");
  const auto da = dims[0].get<std::size_t>();
  const auto db = dims[1].get<std::size_t>();
  const HermitianOperator op = operator_from_json(field(j, "matrix", "state"), "state matrix");
  return relabel_errors("state", [&] { return BipartiteState(QuantumState(op), da, db); });
}

Json measurements_to_json(const MeasurementAssemblage& ma) {
  Json j;
  j["settings"] = ma.settings();
  j["outcomes"] = ma.outcomes();
  Json el = Json::array();
  for (std::size_t x = 0; x < ma.settings(); ++x) {
    Json row = Json::array();
    for (std::size_t a = 0; a < ma.outcomes(); ++a) row.push_back(matrix_to_json(ma.element(a, x).matrix()));
    el.push_back(std::move(row));
  }
  j["elements"] = std::move(el);
  return j;
}

MeasurementAssemblage measurements_from_json(const Json& j) {
  auto grid = grid_from_json(j, "elements", "measurements");
  std::vector<Povm> povms;
  for (std::size_t x = 0; x < grid.size(); ++x)
    povms.push_back(relabel_errors("measurements setting x=" + std::to_string(x + 1),
                                   [&] { return Povm(std::move(grid[x])); }));
  return MeasurementAssemblage(std::move(povms));
}

Json assemblage_to_json(const Assemblage& a) {
  Json j;
  j["settings"] = a.settings();
  j["outcomes"] = a.outcomes();
  Json m = Json::array();
  for (std::size_t x = 0; x < a.settings(); ++x) {
    Json row = Json::array();
    for (std::size_t o = 0; o < a.outcomes(); ++o) row.push_back(matrix_to_json(a.member(o, x).matrix()));
    m.push_back(std::move(row));
  }
  j["members"] = std::move(m);
  return j;
}

Assemblage assemblage_from_json(const Json& j) {
  auto grid = grid_from_json(j, "members", "assemblage");
  return relabel_errors("assemblage", [&] { return Assemblage(std::move(grid)); });
}

Json instrument_to_json(const Instrument& inst) {
  Json j;
  j["input_dim"] = inst.input_dim();
  j["output_dim"] = inst.output_dim();
  Json br = Json::array();
  for (const auto& b : inst.branches()) {
    Json ks = Json::array();
    for (const auto& k : b.kraus()) ks.push_back(matrix_to_json(k));
    br.push_back(std::move(ks));
  }
  j["branches"] = std::move(br);
  return j;
}

Instrument instrument_from_json(const Json& j) {
  const std::size_t in = count_field(j, "input_dim", "instrument");
  const std::size_t out = count_field(j, "output_dim", "instrument");
  const Json& br = array_field(j, "branches", "instrument");
  require(!br.empty(), "instrument: no branches");
  std::vector<Subchannel> branches;
  for (std::size_t b = 0; b < br.size(); ++b) {
    const std::string where = "instrument branch " + std::to_string(b + 1);
    require(br[b].is_array(), where + ": expected a list of Kraus matrices");
    std::vector<ComplexMatrix> kraus;
    for (std::size_t k = 0; k < br[b].size(); ++k)
      kraus.push_back(matrix_from_json(br[b][k], where + " Kraus " + std::to_string(k + 1)));
    branches.push_back(relabel_errors(where, [&] { return Subchannel(in, out, std::move(kraus)); }));
  }
  return relabel_errors("instrument", [&] { return Instrument(std::move(branches)); });
}

Json witness_to_json(const OperatorGrid& f) {
  Json j = Json::array();
  for (const auto& row : f) {
    Json r = Json::array();
    for (const auto& op : row) r.push_back(matrix_to_json(op.matrix()));
    j.push_back(std::move(r));
  }
  return j;
}

Json report_to_json(const SteeringReport& r, std::uint64_t seed) {
  Json j;
  j["R"] = r.robustness;
  j["primal"] = r.primal_value;
  j["dual"] = r.dual_value;
  j["saturation_gap"] = r.saturation_gap;
  j["settings"] = r.settings;
  j["outcomes"] = r.outcomes;
  j["witness"] = witness_to_json(r.witness);
  Json lhs = Json::array();
  for (std::size_t l = 0; l < r.lhs_model.size(); ++l) {
    Json e;
    e["strategy"] = strategy_to_json(r.strategies[l]);
    e["sigma"] = matrix_to_json(r.lhs_model[l].matrix());
    lhs.push_back(std::move(e));
  }
  j["lhs_model"] = std::move(lhs);
  j["noise_assemblage"] = r.noise_assemblage ? assemblage_to_json(*r.noise_assemblage) : Json(nullptr);
  j["status"] = status_to_json(r);
  j["residuals"] = {{"primal", residuals_to_json(r.primal_residuals)},
                    {"dual", residuals_to_json(r.dual_residuals)}};
  j["seed"] = seed;
  return j;
}

Json state_report_to_json(const StateSteeringReport& r, std::uint64_t seed,
                          const std::optional<SeesawSummary>& seesaw) {
  Json j;
  j["lower_bound"] = r.lower_bound;
  j["bound_kind"] = "lower bound: maximum over the evaluated measurement assemblages";
  j["best"] = r.best().name;
  j["best_measurements"] = measurements_to_json(r.best().measurements);
  Json cands = Json::array();
  for (const auto& c : r.candidates) {
    Json e;
    e["name"] = c.name;
    if (c.report) {
      e["R"] = c.report->robustness;
      e["primal"] = c.report->primal_value;
      e["dual"] = c.report->dual_value;
      e["saturation_gap"] = c.report->saturation_gap;
      e["status"] = status_to_json(*c.report);
    } else {
      e["error"] = c.error;
    }
    cands.push_back(std::move(e));
  }
  j["candidates"] = std::move(cands);
  j["upper_bound"] = r.upper_bound ? Json(*r.upper_bound) : Json(nullptr);
  j["partial"] = r.partial;
  if (seesaw) {
    Json s;
    s["rounds"] = seesaw->rounds;
    s["start"] = seesaw->start;
    s["R"] = seesaw->robustness;
    s["history"] = seesaw->history;
    j["seesaw"] = std::move(s);
  }
  j["seed"] = seed;
  return j;
}

Json discrimination_to_json(const DiscriminationResult& r) {
  Json j;
  j["p_oneway"] = r.p_oneway;
  j["p_ne"] = {r.p_ne_low, r.p_ne_high};
  j["ratio"] = {r.ratio_low, r.ratio_high};
  j["R"] = r.robustness;
  j["alpha"] = r.alpha;
  j["N"] = r.padding;
  j["seed"] = r.seed;
  return j;
}

Json mub_report_to_json(const MubBoundReport& r, std::uint64_t seed) {
  Json j;
  j["d"] = r.d;
  j["analytic"] = r.analytic;
  j["coarse"] = r.coarse;
  j["sdp"] = r.sdp ? Json(*r.sdp) : Json(nullptr);
  j["verified"] = r.verified;
  j["norm_check_max"] = r.norm_check_max ? Json(*r.norm_check_max) : Json(nullptr);
  if (!r.note.empty()) j["note"] = r.note;
  j["seed"] = seed;
  return j;
}

void check_report_schema(const Json& j, ReportKind kind) {
  require(j.is_object(), "report: expected an object");
  require(field(j, "seed", "report").is_number_unsigned(), "report: \"seed\" must be an unsigned integer");
  switch (kind) {
    case ReportKind::Robustness: {
      for (const char* k : {"R", "primal", "dual", "saturation_gap"}) require_number(j, k, "report");
      const std::size_t nx = count_field(j, "settings", "report");
      const std::size_t na = count_field(j, "outcomes", "report");
      const Json& w = array_field(j, "witness", "report", nx);
      for (const auto& row : w) {
        require(row.is_array() && row.size() == na, "report: witness row has the wrong length");
        for (const auto& m : row) require_matrix(m, "report witness");
      }
      for (const auto& e : array_field(j, "lhs_model", "report")) {
        require(array_field(e, "strategy", "report lhs_model", nx).is_array(), "report: bad strategy");
        require_matrix(field(e, "sigma", "report lhs_model"), "report lhs_model sigma");
      }
      const Json& noise = field(j, "noise_assemblage", "report");
      if (!noise.is_null()) (void)grid_from_json(noise, "members", "report noise_assemblage");
      break;
    }
    case ReportKind::StateSteering: {
      require_number(j, "lower_bound", "report");
      require_number_or_null(j, "upper_bound", "report");
      require(field(j, "best", "report").is_string(), "report: \"best\" must be a string");
      (void)measurements_from_json(field(j, "best_measurements", "report"));
      for (const auto& c : array_field(j, "candidates", "report"))
        require(field(c, "name", "report candidate").is_string(), "report: candidate name must be a string");
      require(field(j, "partial", "report").is_boolean(), "report: \"partial\" must be a boolean");
      break;
    }
    case ReportKind::Discrimination: {
      for (const char* k : {"p_oneway", "R", "alpha"}) require_number(j, k, "report");
      for (const char* k : {"p_ne", "ratio"}) {
        const Json& v = array_field(j, k, "report", 2);
        require(v[0].is_number() && v[1].is_number(), std::string("report: \"") + k + "\" must hold numbers");
      }
      require(field(j, "N", "report").is_number_unsigned(), "report: \"N\" must be an unsigned integer");
      break;
    }
    case ReportKind::MubBound: {
      require(field(j, "d", "report").is_number_unsigned(), "report: \"d\" must be an unsigned integer");
      for (const char* k : {"analytic", "coarse"}) require_number(j, k, "report");
      require_number_or_null(j, "sdp", "report");
      require(field(j, "verified", "report").is_boolean(), "report: \"verified\" must be a boolean");
      break;
    }
  }
}

}  // namespace steer::io
