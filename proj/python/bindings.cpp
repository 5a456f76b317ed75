#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "conelyap/errors.hpp"
#include "conelyap/io.hpp"
#include "conelyap/lyapunov.hpp"
#include "conelyap/oracle.hpp"

namespace py = pybind11;
using namespace conelyap;

namespace {

// Reports and documents cross the boundary as Python dicts.
py::object to_python(const io::Json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

io::Json from_python(const py::object& o) {
  return io::parse_json_text(py::module_::import("json").attr("dumps")(o).cast<std::string>(), "<python>");
}

py::dict feasible_dict(const FeasibleSetResult& f) {
  py::dict d;
  d["cone"] = f.cone;
  d["converged"] = f.converged;
  d["iterations"] = f.iterations;
  d["fixed_point_k"] = f.fixed_point_k;
  return d;
}

py::object decision(const Decision& d) { return d.conclusive ? py::object(py::bool_(d.value)) : py::object(py::none()); }

VerifyOptions options(int samples, std::uint64_t seed, int max_iter) {
  VerifyOptions o;
  o.sampling = {samples, seed};
  o.max_iter = max_iter;
  return o;
}

}  // namespace

PYBIND11_MODULE(_conelyap, m) {
  m.doc() = "Lyapunov analysis of polyhedral convex processes";

  static py::exception<Error> error(m, "Error");
  static py::exception<DimensionMismatch> dim_error(m, "DimensionMismatch", error.ptr());
  static py::exception<SolverError> solver_error(m, "SolverError", error.ptr());
  static py::exception<ParseError> parse_error(m, "ParseError", error.ptr());
  static py::exception<IoError> io_error(m, "IoError", error.ptr());
  static py::exception<Unsupported> unsupported(m, "Unsupported", error.ptr());
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const DimensionMismatch& e) {
      dim_error(e.what());
    } catch (const SolverError& e) {
      solver_error(e.what());
    } catch (const ParseError& e) {
      parse_error(e.what());
    } catch (const IoError& e) {
      io_error(e.what());
    } catch (const Unsupported& e) {
      unsupported(e.what());
    } catch (const Error& e) {
      error(e.what());
    }
  });

  py::enum_<PolarSign>(m, "PolarSign").value("negative", PolarSign::negative).value("positive", PolarSign::positive);

  py::class_<PolyCone>(m, "PolyCone")
      .def_static("from_generators", py::overload_cast<const Mat&, const Mat&>(&PolyCone::from_generators),
                  py::arg("rays"), py::arg("lineality") = Mat())
      .def_static("from_constraints", py::overload_cast<const Mat&, const Mat&>(&PolyCone::from_constraints),
                  py::arg("inequalities"), py::arg("equalities") = Mat())
      .def_static("whole_space", &PolyCone::whole_space)
      .def_static("origin", &PolyCone::origin)
      .def_static("nonnegative_orthant", &PolyCone::nonnegative_orthant)
      .def_static("subspace", &PolyCone::subspace, py::arg("basis"), py::arg("dim"))
      .def_static("from_json", [](const py::object& o) { return io::cone_from_json(from_python(o), "cone"); })
      .def("to_json", [](const PolyCone& c) { return to_python(io::cone_to_json(c)); })
      .def_property_readonly("dim", &PolyCone::dim)
      .def_property_readonly("rays", [](const PolyCone& c) { return dd_convert(c).rays(); })
      .def_property_readonly("lineality", [](const PolyCone& c) { return dd_convert(c).lineality_basis(); })
      .def_property_readonly("inequalities", [](const PolyCone& c) { return dd_convert(c).inequalities(); })
      .def_property_readonly("equalities", [](const PolyCone& c) { return dd_convert(c).equalities(); })
      .def("__contains__", [](const PolyCone& c, const Vec& x) { return contains(c, x); })
      .def("__repr__", [](const PolyCone& c) { return "<PolyCone " + io::cone_to_text(c) + ">"; });

  m.def("polar", &polar, py::arg("cone"), py::arg("sign") = PolarSign::negative);
  m.def("intersect", &intersect);
  m.def("sum", &sum);
  m.def("equals", [](const PolyCone& a, const PolyCone& b) { return equals(a, b); });
  m.def("includes", [](const PolyCone& outer, const PolyCone& inner) { return includes(outer, inner); });
  m.def("is_trivial", &is_trivial);
  m.def("project_point", [](const PolyCone& c, const Vec& p) { return project_point(c, p); });

  py::class_<ConvexProcess>(m, "ConvexProcess")
      .def(py::init<Eigen::Index, PolyCone>(), py::arg("n"), py::arg("graph"))
      .def_static("linear_map", &ConvexProcess::linear_map)
      .def_static("affine_cone", &ConvexProcess::affine_cone, py::arg("a"), py::arg("input"), py::arg("state"))
      .def_static("from_json", [](const py::object& o) { return io::process_from_json(from_python(o), "process"); })
      .def_static("load", [](const std::string& path) { return io::process_from_json(io::load_json_file(path), path); })
      .def("to_json", [](const ConvexProcess& h) { return to_python(io::process_to_json(h)); })
      .def_property_readonly("n", &ConvexProcess::n)
      .def_property_readonly("graph", &ConvexProcess::graph)
      .def_property_readonly("is_linear", &ConvexProcess::is_linear)
      .def("image", [](const ConvexProcess& h, const Vec& x) {
        const PolyhedronVRep v = vertex_enumeration(image_of_point(h, x));
        return py::make_tuple(v.points, v.rays, v.lines);
      });

  m.def("domain", &domain);
  m.def("range", &range);
  m.def("image_at_origin", &image_at_origin);
  m.def("dual", &dual, py::arg("process"), py::arg("sign"));
  m.def("minimal_linear", &minimal_linear);
  m.def("maximal_linear", &maximal_linear);
  m.def("linear_dual", &linear_dual);
  m.def("reachable_linear", &reachable_linear);
  m.def("feasible_linear", &feasible_linear);
  m.def("feasible_set", [](const ConvexProcess& h, int max_iter) { return feasible_dict(feasible_set(h, max_iter)); },
        py::arg("process"), py::arg("max_iter") = -1);
  m.def("check_domain_condition", &check_domain_condition);
  m.def(
      "condition_panel",
      [](const ConvexProcess& h, int max_iter) {
        const auto t = check_transversality(h, max_iter);
        py::dict d, tr;
        tr["pos"] = decision(t.pos);
        tr["neg"] = decision(t.neg);
        d["domain_condition"] = check_domain_condition(h);
        d["transversality"] = tr;
        d["necessary"] = decision(check_necessary_condition(h, max_iter));
        d["rint"] = decision(check_rint_condition(h, max_iter));
        return d;
      },
      py::arg("process"), py::arg("max_iter") = -1, "Condition panel; None marks an undecided entry.");

  py::class_<ConeFunction>(m, "ConeFunction")
      .def_static("quad_on_cone", &ConeFunction::quad_on_cone, py::arg("q"), py::arg("cone"))
      .def_static("quadratic", &ConeFunction::quadratic)
      .def_static("half_norm_sq", &ConeFunction::half_norm_sq)
      .def_static("scaled_dist_sq", &ConeFunction::scaled_dist_sq, py::arg("alpha"), py::arg("cone"))
      .def_static("conjugate_of", &ConeFunction::conjugate_of)
      .def_static("restricted", &ConeFunction::restricted)
      .def_static("from_json", [](const py::object& o) { return io::function_from_json(from_python(o), "function"); })
      .def_static("load", [](const std::string& path) { return io::function_from_json(io::load_json_file(path), path); })
      .def("to_json", [](const ConeFunction& f) { return to_python(io::function_to_json(f)); })
      .def_property_readonly("n", &ConeFunction::n)
      .def_property_readonly("kind", [](const ConeFunction& f) { return to_string(f.kind()); })
      .def("__call__", [](const ConeFunction& f, const Vec& x) { return evaluate(f, x); });

  m.def("evaluate", [](const ConeFunction& f, const Vec& x) { return evaluate(f, x); });
  m.def("conjugate", &conjugate);
  m.def("restrict", &restrict);
  m.def(
      "posdef_bounds",
      [](const ConeFunction& f, const PolyCone& c) {
        const auto b = posdef_bounds(f, c);
        py::dict d;
        d["status"] = to_string(b.status);
        d["alpha"] = b.alpha;
        d["beta"] = b.beta;
        d["exact"] = b.exact;
        return d;
      },
      py::arg("function"), py::arg("cone"));
  m.def("check_theorem1_transfer", [](const ConeFunction& f, const PolyCone& c, const PolyCone& d) {
    return to_python(io::report_to_json(check_theorem1_transfer(f, c, d)));
  });

  m.def(
      "verify",
      [](const ConvexProcess& h, const ConeFunction& v, const std::string& mode, double gamma, int samples,
         std::uint64_t seed, int max_iter) {
        LyapunovQuery q{.process = h, .candidate = v};
        q.mode = parse_mode(mode);
        q.gamma = gamma;
        q.sampling = {samples, seed};
        q.max_iter = max_iter;
        return to_python(io::report_to_json(verify(q)));
      },
      py::arg("process"), py::arg("function"), py::arg("mode") = "weak", py::arg("gamma") = 0.5,
      py::arg("samples") = 1000, py::arg("seed") = 1, py::arg("max_iter") = -1);
  m.def(
      "check_theorem2",
      [](const ConvexProcess& h, const ConeFunction& v, double gamma, int samples, std::uint64_t seed, int max_iter) {
        return to_python(io::report_to_json(check_theorem2(h, v, gamma, options(samples, seed, max_iter))));
      },
      py::arg("process"), py::arg("function"), py::arg("gamma"), py::arg("samples") = 1000, py::arg("seed") = 1,
      py::arg("max_iter") = -1);
  m.def(
      "check_theorem3",
      [](const ConvexProcess& h, const ConvexProcess& g, const ConeFunction& v, double gamma, bool g_is_adjoint,
         int samples, std::uint64_t seed, int max_iter) {
        return to_python(
            io::report_to_json(check_theorem3(h, g, v, gamma, g_is_adjoint, options(samples, seed, max_iter))));
      },
      py::arg("process"), py::arg("g"), py::arg("function"), py::arg("gamma"), py::arg("g_is_adjoint") = false,
      py::arg("samples") = 1000, py::arg("seed") = 1, py::arg("max_iter") = -1);
  m.def(
      "simulate",
      [](const ConvexProcess& h, const ConeFunction& v, const Vec& x0, int steps, const std::string& policy,
         std::uint64_t seed) {
        const Trajectory t = simulate(h, v, x0, steps, parse_policy(policy), seed);
        py::dict d;
        d["states"] = t.states;
        d["values"] = t.values;
        d["stopped"] = t.stopped;
        d["outer_approximation"] = t.outer_approximation;
        return d;
      },
      py::arg("process"), py::arg("function"), py::arg("x0"), py::arg("steps") = 10, py::arg("policy") = "min_V",
      py::arg("seed") = 1);

  m.def(
      "stabilizable_sample",
      [](const ConvexProcess& h, const Vec& x0, int d, double epsilon) {
        const auto r = oracle::stabilizable_sample(h, x0, d, epsilon);
        py::dict out;
        out["verdict"] = oracle::to_string(r.verdict);
        out["rho"] = r.rho;
        out["envelope"] = r.envelope;
        out["trajectory"] = r.trajectory;
        return out;
      },
      py::arg("process"), py::arg("x0"), py::arg("depth"), py::arg("epsilon") = 1e-3);
  m.def("feasible_depth", [](const ConvexProcess& h, const Vec& x0, int d) { return oracle::feasible_depth(h, x0, d); });
}
