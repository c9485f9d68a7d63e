#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ps12/geometry.hpp"
#include "ps12/macro_mesh.hpp"
#include "ps12/rng.hpp"
#include "ps12/s_basis.hpp"
#include "ps12/simplex_spline.hpp"
#include "ps12/suites.hpp"

namespace py = pybind11;
using namespace ps12;

namespace {

using XY = std::pair<double, double>;

Point2 to_point(const XY& p) { return {p.first, p.second}; }
XY from_point(Point2 p) { return {p.x, p.y}; }

Triangle to_triangle(const std::array<XY, 3>& corners) {
    return Triangle(to_point(corners[0]), to_point(corners[1]),
                    to_point(corners[2]));
}

std::function<double(Point2)> wrap_fn(const std::function<double(double, double)>& f) {
    return [f](Point2 p) { return f(p.x, p.y); };
}

}  // namespace

PYBIND11_MODULE(_ps12, m) {
    m.doc() = "C1 quadratic simplex splines on the Powell-Sabin 12-split";

    py::class_<PS12Frame>(m, "Frame")
        .def(py::init([](const std::array<XY, 3>& corners) {
                 return make_frame(to_triangle(corners));
             }),
             py::arg("corners"))
        .def_property_readonly("vertices",
                               [](const PS12Frame& f) {
                                   std::vector<XY> out;
                                   for (const Point2& v : f.vertices)
                                       out.push_back(from_point(v));
                                   return out;
                               })
        .def_property_readonly("area",
                               [](const PS12Frame& f) { return f.macro_area; })
        .def_property_readonly("diameter",
                               [](const PS12Frame& f) { return f.diameter(); })
        .def("subtriangle", [](const PS12Frame& f, int id) {
            const auto& idx = PS12Frame::subtriangle_vertices(id);
            return std::array<int, 3>{idx[0], idx[1], idx[2]};
        });

    py::class_<SBasis>(m, "SBasis")
        .def(py::init([](const std::array<XY, 3>& corners) {
                 return SBasis(make_frame(to_triangle(corners)));
             }),
             py::arg("corners"))
        .def(py::init<const PS12Frame&>(), py::arg("frame"))
        .def_property_readonly("frame", &SBasis::frame)
        .def("eval",
             [](const SBasis& b, double x, double y) {
                 const auto vals = b.eval({x, y});
                 return std::vector<double>(vals.begin(), vals.end());
             },
             py::arg("x"), py::arg("y"))
        .def("derivative",
             [](const SBasis& b, int j, double x, double y, double ux, double uy) {
                 return b.derivative_one(j, {x, y}, {ux, uy});
             },
             py::arg("j"), py::arg("x"), py::arg("y"), py::arg("ux"), py::arg("uy"));

    m.def("basis_labels", [] {
        std::vector<std::string> out;
        for (const SBasisFunction& f : s_basis_functions()) out.push_back(f.label());
        return out;
    });
    m.def("basis_multiplicities", [] {
        std::vector<std::string> out;
        for (const SBasisFunction& f : s_basis_functions())
            out.push_back(f.mult.digits());
        return out;
    });

    m.def(
        "eval_q",
        [](const std::vector<XY>& knots, double x, double y,
           double normalization_area, bool interior_limit,
           const std::array<XY, 3>& frame_corners) {
            std::vector<Point2> pts;
            for (const XY& p : knots) pts.push_back(to_point(p));
            const KnotMultiset k(std::move(pts));
            EvalContext ctx;
            if (interior_limit) {
                ctx = EvalContext::for_frame(make_frame(to_triangle(frame_corners)),
                                             HalfOpenMode::interior_limit);
            } else {
                ctx.normalization_area = normalization_area;
            }
            if (normalization_area > 0) ctx.normalization_area = normalization_area;
            return eval_q(k, {x, y}, ctx);
        },
        py::arg("knots"), py::arg("x"), py::arg("y"),
        py::arg("normalization_area") = 0.0, py::arg("interior_limit") = true,
        py::arg("frame_corners") =
            std::array<XY, 3>{{{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}}});

    m.def("univariate_bspline",
          [](const std::array<double, 4>& knots, double t) {
              return univariate_bspline(knots, t);
          },
          py::arg("knots"), py::arg("t"));

    py::class_<SplineFunction>(m, "SplineFn")
        .def_property_readonly("coefficients",
                               [](const SplineFunction& s) {
                                   return std::vector<double>(
                                       s.coefficients.begin(), s.coefficients.end());
                               })
        .def("__call__",
             [](const SplineFunction& s, double x, double y) {
                 return s.eval({x, y});
             },
             py::arg("x"), py::arg("y"));

    m.def(
        "quasi_interpolant",
        [](const std::array<XY, 3>& corners,
           const std::function<double(double, double)>& f) {
            return quasi_interpolant(make_frame(to_triangle(corners)), wrap_fn(f));
        },
        py::arg("corners"), py::arg("f"));

    m.def(
        "marsden_max_error",
        [](const std::array<XY, 3>& corners, const std::array<double, 3>& c,
           int samples, std::uint64_t seed) {
            const PS12Frame frame = make_frame(to_triangle(corners));
            const SBasis basis(frame);
            Rng rng(seed);
            std::vector<Point2> pts;
            for (int i = 0; i < samples; ++i) {
                Bary3 b = rng.bary();
                while (b.min() < 1e-6) b = rng.bary();
                pts.push_back(combine(frame.v(1), frame.v(2), frame.v(3), b));
            }
            return verify_marsden(basis, c, pts);
        },
        py::arg("corners"), py::arg("c"), py::arg("samples") = 200,
        py::arg("seed") = 1);

    py::class_<Triangulation>(m, "Mesh")
        .def(py::init([](const std::vector<XY>& vertices,
                         const std::vector<std::array<int, 3>>& triangles) {
                 std::vector<Point2> pts;
                 for (const XY& p : vertices) pts.push_back(to_point(p));
                 return Triangulation::build(std::move(pts), triangles);
             }),
             py::arg("vertices"), py::arg("triangles"))
        .def_static("load", &Triangulation::from_file, py::arg("path"))
        .def_property_readonly("num_vertices", &Triangulation::num_vertices)
        .def_property_readonly("num_edges", &Triangulation::num_edges)
        .def_property_readonly("num_triangles", &Triangulation::num_triangles)
        .def("refined", &Triangulation::refined)
        .def("mesh_size", &Triangulation::mesh_size);

    m.def(
        "mesh_dimension",
        [](const Triangulation& mesh) {
            const auto space = assemble_c1_constraints(mesh);
            py::dict d;
            d["computed"] = space->dimension();
            d["formula"] = space->formula_dimension();
            d["rank"] = space->rank;
            d["gap"] = space->spectral_gap;
            d["gap_ok"] = space->gap_ok();
            return d;
        },
        py::arg("mesh"));

    m.def(
        "h2_convergence",
        [](const std::function<double(double, double)>& f, const Triangulation& mesh,
           int levels) {
            const ConvergenceResult res = h2_convergence(wrap_fn(f), mesh, levels);
            py::dict d;
            py::list rows;
            for (const ConvergenceRow& r : res.rows)
                rows.append(py::make_tuple(r.level, r.h, r.distance));
            d["rows"] = rows;
            d["slope"] = res.slope;
            d["slope_defined"] = res.slope_defined;
            d["exact_reproduction"] = res.exact_reproduction;
            return d;
        },
        py::arg("f"), py::arg("mesh"), py::arg("levels") = 4);

    m.def(
        "run_suite",
        [](const std::string& name, std::uint64_t seed, long oracle_samples) {
            SuiteConfig cfg;
            cfg.seed = seed;
            cfg.oracle_samples = oracle_samples;
            py::list out;
            for (const CheckResult& r : run_suite(name, cfg)) {
                py::dict d;
                d["check"] = r.name;
                d["max_error"] = r.max_error;
                d["tolerance"] = r.tolerance;
                d["pass"] = r.pass;
                out.append(d);
            }
            return out;
        },
        py::arg("name"), py::arg("seed") = 1, py::arg("oracle_samples") = 1000000);

    py::register_exception<MeshError>(m, "MeshError");
}
