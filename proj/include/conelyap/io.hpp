#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "conelyap/functions.hpp"
#include "conelyap/lyapunov.hpp"
#include "conelyap/process.hpp"
#include "conelyap/report.hpp"

namespace conelyap::io {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchema = "conelyap/1";

/// Parses JSON text; syntax errors become ParseError "source:line:column: message".
Json parse_json_text(const std::string& text, const std::string& source);
/// Reads and parses a file; IoError if it cannot be read.
Json load_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

/// {"dim", "generators", "lineality", "inequalities", "equalities"}; absent lists mean none.
/// Generators and constraints given together describe their intersection.
PolyCone cone_from_json(const Json& j, const std::string& where = "cone");
/// Canonical form with both representations.
Json cone_to_json(const PolyCone& c);

/// {"n", "graph"} with graph coordinates (x, y), or {"A", "input_cone", "state_constraint"}
/// for x |-> A x + K if x in S.
ConvexProcess process_from_json(const Json& j, const std::string& where = "process");
Json process_to_json(const ConvexProcess& h);

/// Variants quad_on_cone {"Q", "cone"}, scaled_dist_sq {"alpha", "cone"}, conjugate_of {"inner"},
/// restricted {"inner", "cone"}. The value of quad_on_cone is x^T Q x; a missing cone means R^n.
ConeFunction function_from_json(const Json& j, const std::string& where = "function");
Json function_to_json(const ConeFunction& f);

/// {"process", "function", "mode", "gamma", "sampling": {"count", "seed"}, "max_iter", "ratio_tol"};
/// process and function are inline objects or paths relative to base_dir.
LyapunovQuery query_from_json(const Json& j, const std::filesystem::path& base_dir, const std::string& where = "query");

/// Finite numbers as numbers; infinities and NaN as the strings "inf", "-inf", "nan".
Json number(double v);
Json vector_to_json(const Vec& v);
Json matrix_to_json(const Mat& m);
Vec vector_from_json(const Json& j, const std::string& where, Eigen::Index expected = -1);
Mat matrix_from_json(const Json& j, const std::string& where, Eigen::Index cols);

Json report_to_json(const VerificationReport& r);
/// Adds the schema tag to a top-level document.
Json document(Json body);

std::string format_number(double v);
std::string format_vector(const Vec& v);
/// Irredundant generator list, e.g. "cone{(1, 0)} + span{(0, 1)}".
std::string cone_to_text(const PolyCone& c);
std::string report_to_text(const VerificationReport& r, int indent = 0);

}  // namespace conelyap::io
