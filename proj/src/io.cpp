#include "conelyap/io.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "conelyap/errors.hpp"

namespace conelyap::io {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& msg) { throw ParseError(where + ": " + msg); }

void check_fields(const Json& j, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) fail(where, "expected an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* a : allowed) known = known || it.key() == a;
    if (!known) fail(where, "unknown field '" + it.key() + "'");
  }
}

double number_from_json(const Json& j, const std::string& where) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
  }
  fail(where, "expected a number");
}

Eigen::Index dimension_from_json(const Json& j, const std::string& where) {
  if (!j.is_number_integer() || j.get<long long>() < 1) fail(where, "expected a positive integer");
  return static_cast<Eigen::Index>(j.get<long long>());
}

const Json& required(const Json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) fail(where, std::string("missing field '") + key + "'");
  return j.at(key);
}

Json reference_target(const Json& j, const std::filesystem::path& base_dir) {
  if (j.is_string()) return load_json_file(base_dir / j.get<std::string>());
  return j;
}

}  // namespace

Json parse_json_text(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t line = 1, col = 1;
    const std::size_t stop = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < stop; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::string msg = e.what();
    const auto colon = msg.rfind(": ");
    if (colon != std::string::npos) msg = msg.substr(colon + 2);
    throw ParseError(source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + msg);
  }
}

Json load_json_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_json_text(buf.str(), path.string());
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed for " + path.string());
}

Json number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

Json vector_to_json(const Vec& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(number(v(i)));
  return out;
}

Json matrix_to_json(const Mat& m) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) out.push_back(vector_to_json(m.row(i).transpose()));
  return out;
}

Vec vector_from_json(const Json& j, const std::string& where, Eigen::Index expected) {
  if (!j.is_array()) fail(where, "expected an array of numbers");
  if (expected >= 0 && static_cast<Eigen::Index>(j.size()) != expected)
    fail(where, "expected " + std::to_string(expected) + " entries, got " + std::to_string(j.size()));
  Vec v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    const double x = number_from_json(j[i], where + "[" + std::to_string(i) + "]");
    if (!std::isfinite(x)) fail(where + "[" + std::to_string(i) + "]", "expected a finite number");
    v(static_cast<Eigen::Index>(i)) = x;
  }
  return v;
}

Mat matrix_from_json(const Json& j, const std::string& where, Eigen::Index cols) {
  if (!j.is_array()) fail(where, "expected an array of rows");
  Mat m(static_cast<Eigen::Index>(j.size()), cols);
  for (std::size_t i = 0; i < j.size(); ++i)
    m.row(static_cast<Eigen::Index>(i)) = vector_from_json(j[i], where + "[" + std::to_string(i) + "]", cols).transpose();
  return m;
}

PolyCone cone_from_json(const Json& j, const std::string& where) {
  check_fields(j, where, {"dim", "generators", "lineality", "inequalities", "equalities"});
  const Eigen::Index n = dimension_from_json(required(j, "dim", where), where + ".dim");
  auto list = [&](const char* key) {
    return j.contains(key) ? matrix_from_json(j.at(key), where + "." + key, n) : Mat(0, n);
  };
  const Mat gens = list("generators"), lines = list("lineality");
  const Mat ineq = list("inequalities"), eq = list("equalities");
  const bool v = j.contains("generators") || j.contains("lineality");
  const bool h = j.contains("inequalities") || j.contains("equalities");
  if (v && h) return intersect(PolyCone::from_generators(gens, lines), PolyCone::from_constraints(ineq, eq));
  if (v) return dd_convert(PolyCone::from_generators(gens, lines));
  if (h) return dd_convert(PolyCone::from_constraints(ineq, eq));
  // No lists at all: no generators, so the cone is {0}.
  return PolyCone::origin(n);
}

Json cone_to_json(const PolyCone& c) {
  const PolyCone m = c.materialized() ? c : dd_convert(c);
  Json out;
  out["dim"] = m.dim();
  out["generators"] = matrix_to_json(m.rays());
  out["lineality"] = matrix_to_json(m.lineality_basis());
  out["inequalities"] = matrix_to_json(m.inequalities());
  out["equalities"] = matrix_to_json(m.equalities());
  return out;
}

ConvexProcess process_from_json(const Json& j, const std::string& where) {
  if (!j.is_object()) fail(where, "expected an object");
  if (j.contains("graph")) {
    check_fields(j, where, {"n", "graph", "name", "description"});
    const Eigen::Index n = dimension_from_json(required(j, "n", where), where + ".n");
    const PolyCone g = cone_from_json(j.at("graph"), where + ".graph");
    if (g.dim() != 2 * n) fail(where + ".graph.dim", "expected " + std::to_string(2 * n) + " for n = " + std::to_string(n));
    return ConvexProcess(n, g);
  }
  check_fields(j, where, {"A", "input_cone", "state_constraint", "name", "description"});
  const Json& ja = required(j, "A", where);
  if (!ja.is_array() || ja.empty()) fail(where + ".A", "expected a nonempty square matrix");
  const auto n = static_cast<Eigen::Index>(ja.size());
  const Mat a = matrix_from_json(ja, where + ".A", n);
  const PolyCone input = j.contains("input_cone") ? cone_from_json(j.at("input_cone"), where + ".input_cone")
                                                  : PolyCone::origin(n);
  const PolyCone state = j.contains("state_constraint")
                             ? cone_from_json(j.at("state_constraint"), where + ".state_constraint")
                             : PolyCone::whole_space(n);
  if (input.dim() != n) fail(where + ".input_cone.dim", "expected " + std::to_string(n));
  if (state.dim() != n) fail(where + ".state_constraint.dim", "expected " + std::to_string(n));
  return ConvexProcess::affine_cone(a, input, state);
}

Json process_to_json(const ConvexProcess& h) {
  Json out;
  out["n"] = h.n();
  out["graph"] = cone_to_json(h.graph());
  return out;
}

ConeFunction function_from_json(const Json& j, const std::string& where) {
  if (!j.is_object()) fail(where, "expected an object");
  const Json& jv = required(j, "variant", where);
  if (!jv.is_string()) fail(where + ".variant", "expected a string");
  const std::string variant = jv.get<std::string>();
  try {
    if (variant == "quad_on_cone") {
      check_fields(j, where, {"variant", "Q", "cone", "name", "description"});
      const Json& jq = required(j, "Q", where);
      if (!jq.is_array() || jq.empty()) fail(where + ".Q", "expected a nonempty square matrix");
      const auto n = static_cast<Eigen::Index>(jq.size());
      const Mat q = matrix_from_json(jq, where + ".Q", n);
      const PolyCone c = j.contains("cone") ? cone_from_json(j.at("cone"), where + ".cone") : PolyCone::whole_space(n);
      if (c.dim() != n) fail(where + ".cone.dim", "expected " + std::to_string(n));
      return ConeFunction::quad_on_cone(q, c);
    }
    if (variant == "scaled_dist_sq") {
      check_fields(j, where, {"variant", "alpha", "cone", "name", "description"});
      const double alpha = number_from_json(required(j, "alpha", where), where + ".alpha");
      return ConeFunction::scaled_dist_sq(alpha, cone_from_json(required(j, "cone", where), where + ".cone"));
    }
    if (variant == "conjugate_of") {
      check_fields(j, where, {"variant", "inner", "name", "description"});
      return ConeFunction::conjugate_of(function_from_json(required(j, "inner", where), where + ".inner"));
    }
    if (variant == "restricted") {
      check_fields(j, where, {"variant", "inner", "cone", "name", "description"});
      const ConeFunction inner = function_from_json(required(j, "inner", where), where + ".inner");
      const PolyCone c = cone_from_json(required(j, "cone", where), where + ".cone");
      if (c.dim() != inner.n()) fail(where + ".cone.dim", "expected " + std::to_string(inner.n()));
      return ConeFunction::restricted(inner, c);
    }
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    fail(where, e.what());
  }
  fail(where + ".variant", "unknown variant '" + variant + "' (expected quad_on_cone, scaled_dist_sq, conjugate_of or restricted)");
}

Json function_to_json(const ConeFunction& f) {
  Json out;
  out["variant"] = to_string(f.kind());
  switch (f.kind()) {
    case ConeFunction::Kind::quad_on_cone:
      out["Q"] = matrix_to_json(f.q());
      out["cone"] = cone_to_json(f.cone());
      break;
    case ConeFunction::Kind::scaled_dist_sq:
      out["alpha"] = number(f.alpha());
      out["cone"] = cone_to_json(f.cone());
      break;
    case ConeFunction::Kind::conjugate_of:
      out["inner"] = function_to_json(f.inner());
      break;
    case ConeFunction::Kind::restricted:
      out["inner"] = function_to_json(f.inner());
      out["cone"] = cone_to_json(f.cone());
      break;
  }
  return out;
}

LyapunovQuery query_from_json(const Json& j, const std::filesystem::path& base_dir, const std::string& where) {
  check_fields(j, where, {"process", "function", "mode", "gamma", "sampling", "max_iter", "ratio_tol"});
  LyapunovQuery q{
      .process = process_from_json(reference_target(required(j, "process", where), base_dir), where + ".process"),
      .candidate = function_from_json(reference_target(required(j, "function", where), base_dir), where + ".function")};
  if (j.contains("mode")) {
    if (!j.at("mode").is_string()) fail(where + ".mode", "expected a string");
    try {
      q.mode = parse_mode(j.at("mode").get<std::string>());
    } catch (const ParseError& e) {
      fail(where + ".mode", e.what());
    }
  }
  if (j.contains("gamma")) q.gamma = number_from_json(j.at("gamma"), where + ".gamma");
  if (!(q.gamma > 0 && q.gamma < 1)) fail(where + ".gamma", "must lie strictly between 0 and 1");
  if (j.contains("sampling")) {
    const Json& s = j.at("sampling");
    check_fields(s, where + ".sampling", {"count", "seed"});
    if (s.contains("count")) q.sampling.count = static_cast<int>(dimension_from_json(s.at("count"), where + ".sampling.count"));
    if (s.contains("seed")) {
      if (!s.at("seed").is_number_unsigned()) fail(where + ".sampling.seed", "expected a nonnegative integer");
      q.sampling.seed = s.at("seed").get<std::uint64_t>();
    }
  }
  if (j.contains("max_iter")) {
    if (!j.at("max_iter").is_number_integer()) fail(where + ".max_iter", "expected an integer");
    q.max_iter = j.at("max_iter").get<int>();
  }
  if (j.contains("ratio_tol")) q.ratio_tol = number_from_json(j.at("ratio_tol"), where + ".ratio_tol");
  if (q.candidate.n() != q.process.n()) fail(where, "function and process dimensions differ");
  return q;
}

Json report_to_json(const VerificationReport& r) {
  Json out;
  out["name"] = r.name;
  out["verdict"] = to_string(r.verdict);
  out["checked_points"] = r.checked_points;
  out["gamma_margin"] = std::isnan(r.gamma_margin) ? Json(nullptr) : number(r.gamma_margin);
  if (!r.detail.empty()) out["detail"] = r.detail;
  Json qs = Json::object();
  for (const auto& [k, v] : r.quantities) qs[k] = number(v);
  out["quantities"] = qs;
  if (r.witness) {
    Json w;
    w["x"] = vector_to_json(r.witness->x);
    if (r.witness->y) w["y"] = vector_to_json(*r.witness->y);
    if (r.witness->ray) w["ray"] = vector_to_json(*r.witness->ray);
    if (!r.witness->note.empty()) w["note"] = r.witness->note;
    out["witness"] = w;
  }
  Json subs = Json::array();
  for (const auto& s : r.sub_reports) subs.push_back(report_to_json(s));
  out["sub_reports"] = subs;
  return out;
}

Json document(Json body) {
  Json out;
  out["schema"] = kSchema;
  for (auto it = body.begin(); it != body.end(); ++it) out[it.key()] = it.value();
  return out;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::abs(v) < 1e-12) v = 0.0;
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

std::string format_vector(const Vec& v) {
  std::string out = "(";
  for (Eigen::Index i = 0; i < v.size(); ++i) out += (i ? ", " : "") + format_number(v(i));
  return out + ")";
}

std::string cone_to_text(const PolyCone& c) {
  const PolyCone m = c.materialized() ? c : dd_convert(c);
  auto rows = [](const Mat& g) {
    std::string s;
    for (Eigen::Index i = 0; i < g.rows(); ++i) s += (i ? ", " : "") + format_vector(g.row(i).transpose());
    return s;
  };
  if (m.rays().rows() == 0 && m.lineality_basis().rows() == 0) return "{0}";
  if (m.rays().rows() == 0 && m.lineality_basis().rows() == m.dim()) return "R^" + std::to_string(m.dim());
  std::string out;
  if (m.rays().rows() > 0) out += "cone{" + rows(m.rays()) + "}";
  if (m.lineality_basis().rows() > 0) out += (out.empty() ? "" : " + ") + std::string("span{") + rows(m.lineality_basis()) + "}";
  return out;
}

std::string report_to_text(const VerificationReport& r, int indent) {
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  std::ostringstream os;
  os << pad << r.name << ": " << to_string(r.verdict) << "\n";
  auto line = [&](const std::string& key, const std::string& value) {
    os << pad << "  " << key << std::string(key.size() < 16 ? 16 - key.size() : 1, ' ') << value << "\n";
  };
  if (r.checked_points > 0) line("checked points", std::to_string(r.checked_points));
  if (!std::isnan(r.gamma_margin)) line("gamma margin", format_number(r.gamma_margin));
  for (const auto& [k, v] : r.quantities) line(k, format_number(v));
  if (!r.detail.empty()) line("detail", r.detail);
  if (r.witness) {
    line("witness x", format_vector(r.witness->x));
    if (r.witness->y) line("witness y", format_vector(*r.witness->y));
    if (r.witness->ray) line("witness ray", format_vector(*r.witness->ray));
    if (!r.witness->note.empty()) line("note", r.witness->note);
  }
  for (const auto& s : r.sub_reports) os << report_to_text(s, indent + 2);
  return os.str();
}

}  // namespace conelyap::io
