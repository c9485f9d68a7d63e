#pragma once

#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ps12/geometry.hpp"
#include "ps12/s_basis.hpp"

namespace ps12 {

struct MeshError : std::runtime_error {
    enum class Code {
        malformed,
        bad_index,
        degenerate_triangle,
        orientation,
        non_conforming,
    };
    MeshError(Code c, const std::string& what) : std::runtime_error(what), code(c) {}
    Code code;
};

struct MeshEdge {
    int v0 = 0, v1 = 0;        // vertex indices, v0 < v1
    int tri_a = -1, tri_b = -1;  // adjacent triangles; tri_b = -1 on the boundary
    bool boundary() const { return tri_b < 0; }
};

/// A conforming triangulation with positively oriented triangles and a
/// derived edge table.
class Triangulation {
public:
    static Triangulation from_file(const std::string& path);
    static Triangulation parse(std::istream& in);
    static Triangulation build(std::vector<Point2> vertices,
                               std::vector<std::array<int, 3>> triangles);

    const std::vector<Point2>& vertices() const { return vertices_; }
    const std::vector<std::array<int, 3>>& triangles() const { return triangles_; }
    const std::vector<MeshEdge>& edges() const { return edges_; }

    int num_vertices() const { return static_cast<int>(vertices_.size()); }
    int num_triangles() const { return static_cast<int>(triangles_.size()); }
    int num_edges() const { return static_cast<int>(edges_.size()); }
    int num_interior_edges() const;

    Triangle triangle(int t) const;
    /// Longest edge in the mesh.
    double mesh_size() const;
    /// Uniform 1:4 refinement by edge midpoints.
    Triangulation refined() const;

private:
    Triangulation() = default;
    std::vector<Point2> vertices_;
    std::vector<std::array<int, 3>> triangles_;
    std::vector<MeshEdge> edges_;
};

/// One collocated continuity equation across an interior edge:
///   sum_j coef_a[j] c(tri_a, j) + sum_j coef_b[j] c(tri_b, j) = 0.
/// Rows are normalized to unit Euclidean norm.
struct ConstraintRow {
    int tri_a = 0, tri_b = 0;
    std::array<double, 12> coef_a{}, coef_b{};
};

/// Per-triangle 12-split layout over a triangulation, with (optionally)
/// the assembled C1 constraint system and its rank analysis.
struct GlobalSpace {
    Triangulation mesh;
    std::vector<SBasis> bases;  // one per triangle

    std::vector<ConstraintRow> constraints;
    std::vector<double> singular_values;
    int rank = 0;
    double spectral_gap = 0.0;  // last kept / first dropped singular value
    bool constraints_assembled = false;

    int dimension() const { return 12 * mesh.num_triangles() - rank; }
    int formula_dimension() const {
        return 3 * mesh.num_vertices() + mesh.num_edges();
    }
    bool gap_ok(double factor = 10.0) const { return spectral_gap >= factor; }

    /// Frames and bases only; no constraint assembly (cheap, any mesh size).
    static std::shared_ptr<const GlobalSpace> layout(Triangulation mesh);
};

/// Collocates value and normal-derivative continuity at five interior
/// points each per interior edge and measures the system's numerical rank
/// (singular-value cutoff 1e-9 relative).  The spline space dimension is
/// 12 |T| - rank.
std::shared_ptr<const GlobalSpace> assemble_c1_constraints(Triangulation mesh);

/// A spline over the whole mesh: 12 coefficients per triangle in canonical
/// basis order.  Whether the coefficients satisfy the C1 constraints is up
/// to the producer; validate() measures it.
struct GlobalSplineFunction {
    std::shared_ptr<const GlobalSpace> space;
    std::vector<std::array<double, 12>> coefficients;

    /// Value at x, or nullopt outside the mesh.  Points on shared edges
    /// resolve to the lowest containing triangle index.
    std::optional<double> eval(Point2 x) const;

    /// max |row . c| over the assembled constraint rows (0 when none).
    double constraint_residual() const;
};

inline std::optional<double> eval_global(const GlobalSplineFunction& g, Point2 x) {
    return g.eval(x);
}

/// Per-triangle quasi-interpolant of f (C0 across edges by construction;
/// C1 whenever f is a quadratic polynomial).
GlobalSplineFunction global_quasi_interpolant(
    std::shared_ptr<const GlobalSpace> space,
    const std::function<double(Point2)>& f);

/// max over all triangles and basis functions of |s(gamma_j) - c_j| where
/// gamma_j is the blossom-pair midpoint of basis function j.
double control_surface_distance(const GlobalSplineFunction& g);

struct ConvergenceRow {
    int level = 0;
    double h = 0.0;
    double distance = 0.0;
};

struct ConvergenceResult {
    std::vector<ConvergenceRow> rows;
    double slope = 0.0;        // least-squares slope of log d vs log h
    bool slope_defined = false;
    bool exact_reproduction = false;  // f reproduced to machine noise
};

/// Measures the control-surface distance of the per-triangle
/// quasi-interpolant of f on the base mesh and `levels` uniform
/// refinements (levels >= 3).
ConvergenceResult h2_convergence(const std::function<double(Point2)>& f,
                                 const Triangulation& base, int levels);

}  // namespace ps12
