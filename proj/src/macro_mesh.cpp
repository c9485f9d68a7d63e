#include "ps12/macro_mesh.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

namespace ps12 {

namespace {

// Collocation parameters along an interior edge (t in (0,1)).  Five value
// points and five normal-derivative points over-determine equality of the
// two piecewise-quadratic traces and their normal derivatives.
constexpr std::array<double, 5> kValueTs{0.1, 0.25, 0.4, 0.7, 0.9};
constexpr std::array<double, 5> kDerivTs{0.1, 0.3, 0.45, 0.7, 0.9};

}  // namespace

Triangulation Triangulation::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw MeshError(MeshError::Code::malformed, "cannot open mesh file: " + path);
    return parse(in);
}

Triangulation Triangulation::parse(std::istream& in) {
    // Strip comments, then tokenize.
    std::vector<std::string> tokens;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string tok;
        while (ls >> tok) tokens.push_back(tok);
    }

    size_t pos = 0;
    auto next_int = [&](const char* what) {
        if (pos >= tokens.size())
            throw MeshError(MeshError::Code::malformed,
                            std::string("mesh file truncated reading ") + what);
        try {
            size_t used = 0;
            const int v = std::stoi(tokens[pos], &used);
            if (used != tokens[pos].size()) throw std::invalid_argument("");
            ++pos;
            return v;
        } catch (const std::exception&) {
            throw MeshError(MeshError::Code::malformed,
                            "bad integer '" + tokens[pos] + "' in mesh file");
        }
    };
    auto next_real = [&](const char* what) {
        if (pos >= tokens.size())
            throw MeshError(MeshError::Code::malformed,
                            std::string("mesh file truncated reading ") + what);
        try {
            size_t used = 0;
            const double v = std::stod(tokens[pos], &used);
            if (used != tokens[pos].size()) throw std::invalid_argument("");
            ++pos;
            return v;
        } catch (const std::exception&) {
            throw MeshError(MeshError::Code::malformed,
                            "bad number '" + tokens[pos] + "' in mesh file");
        }
    };

    const int nv = next_int("vertex count");
    const int nt = next_int("triangle count");
    if (nv < 3 || nt < 1)
        throw MeshError(MeshError::Code::malformed, "mesh needs >= 3 vertices and >= 1 triangle");

    std::vector<Point2> vertices;
    vertices.reserve(nv);
    for (int i = 0; i < nv; ++i) {
        const double x = next_real("vertex x");
        const double y = next_real("vertex y");
        vertices.emplace_back(x, y);
    }
    std::vector<std::array<int, 3>> triangles;
    triangles.reserve(nt);
    for (int i = 0; i < nt; ++i) {
        const int a = next_int("triangle index");
        const int b = next_int("triangle index");
        const int c = next_int("triangle index");
        triangles.push_back({a, b, c});
    }
    if (pos != tokens.size())
        throw MeshError(MeshError::Code::malformed, "trailing data in mesh file");
    return build(std::move(vertices), std::move(triangles));
}

Triangulation Triangulation::build(std::vector<Point2> vertices,
                                   std::vector<std::array<int, 3>> triangles) {
    Triangulation m;
    m.vertices_ = std::move(vertices);
    m.triangles_ = std::move(triangles);
    const int nv = m.num_vertices();
    const double diag = bbox_diagonal(m.vertices_);
    const double area_tol = kAreaTolFactor * diag * diag;

    for (size_t t = 0; t < m.triangles_.size(); ++t) {
        const auto& tri = m.triangles_[t];
        for (int idx : tri)
            if (idx < 0 || idx >= nv)
                throw MeshError(MeshError::Code::bad_index,
                                "triangle " + std::to_string(t) + " references vertex " +
                                    std::to_string(idx));
        if (tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2])
            throw MeshError(MeshError::Code::degenerate_triangle,
                            "triangle " + std::to_string(t) + " repeats a vertex");
        const double twice = cross(m.vertices_[tri[1]] - m.vertices_[tri[0]],
                                   m.vertices_[tri[2]] - m.vertices_[tri[0]]);
        if (std::abs(twice) <= 2.0 * area_tol)
            throw MeshError(MeshError::Code::degenerate_triangle,
                            "triangle " + std::to_string(t) + " is degenerate");
        if (twice < 0.0)
            throw MeshError(MeshError::Code::orientation,
                            "triangle " + std::to_string(t) + " is clockwise");
    }

    // Edge table with adjacency; every interior edge must be traversed once
    // in each direction by counterclockwise triangles.
    std::map<std::pair<int, int>, int> edge_of;
    for (size_t t = 0; t < m.triangles_.size(); ++t) {
        const auto& tri = m.triangles_[t];
        for (int e = 0; e < 3; ++e) {
            const int a = tri[e], b = tri[(e + 1) % 3];
            const auto key = std::minmax(a, b);
            auto it = edge_of.find(key);
            if (it == edge_of.end()) {
                MeshEdge edge;
                edge.v0 = key.first;
                edge.v1 = key.second;
                edge.tri_a = static_cast<int>(t);
                edge_of.emplace(key, static_cast<int>(m.edges_.size()));
                m.edges_.push_back(edge);
            } else {
                MeshEdge& edge = m.edges_[it->second];
                if (edge.tri_b >= 0)
                    throw MeshError(MeshError::Code::non_conforming,
                                    "edge shared by more than two triangles");
                edge.tri_b = static_cast<int>(t);
            }
        }
    }

    // Hanging vertices: no vertex may lie strictly inside another edge.
    const double line_tol = 1e-9 * std::max(diag, 1e-300);
    for (const MeshEdge& e : m.edges_) {
        const Point2 a = m.vertices_[e.v0], b = m.vertices_[e.v1];
        const double len2 = dot(b - a, b - a);
        for (int v = 0; v < nv; ++v) {
            if (v == e.v0 || v == e.v1) continue;
            const Point2 p = m.vertices_[v];
            if (std::abs(line_distance(a, b, p)) > line_tol) continue;
            const double s = dot(p - a, b - a) / len2;
            if (s > 1e-9 && s < 1.0 - 1e-9)
                throw MeshError(MeshError::Code::non_conforming,
                                "vertex " + std::to_string(v) +
                                    " hangs on an edge (non-conforming mesh)");
        }
    }
    return m;
}

int Triangulation::num_interior_edges() const {
    int n = 0;
    for (const MeshEdge& e : edges_)
        if (!e.boundary()) ++n;
    return n;
}

Triangle Triangulation::triangle(int t) const {
    const auto& tri = triangles_[t];
    return Triangle(vertices_[tri[0]], vertices_[tri[1]], vertices_[tri[2]]);
}

double Triangulation::mesh_size() const {
    double h = 0.0;
    for (const MeshEdge& e : edges_)
        h = std::max(h, distance(vertices_[e.v0], vertices_[e.v1]));
    return h;
}

Triangulation Triangulation::refined() const {
    std::vector<Point2> verts = vertices_;
    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int a, int b) {
        const auto key = std::minmax(a, b);
        auto it = midpoint.find(key);
        if (it != midpoint.end()) return it->second;
        const int idx = static_cast<int>(verts.size());
        verts.push_back(0.5 * (vertices_[a] + vertices_[b]));
        midpoint.emplace(key, idx);
        return idx;
    };

    std::vector<std::array<int, 3>> tris;
    tris.reserve(4 * triangles_.size());
    for (const auto& t : triangles_) {
        const int m01 = mid(t[0], t[1]);
        const int m12 = mid(t[1], t[2]);
        const int m02 = mid(t[0], t[2]);
        tris.push_back({t[0], m01, m02});
        tris.push_back({m01, t[1], m12});
        tris.push_back({m02, m12, t[2]});
        tris.push_back({m01, m12, m02});
    }
    return build(std::move(verts), std::move(tris));
}

std::shared_ptr<const GlobalSpace> GlobalSpace::layout(Triangulation mesh) {
    auto space = std::make_shared<GlobalSpace>();
    space->mesh = std::move(mesh);
    space->bases.reserve(space->mesh.num_triangles());
    for (int t = 0; t < space->mesh.num_triangles(); ++t)
        space->bases.emplace_back(make_frame(space->mesh.triangle(t)));
    return space;
}

std::shared_ptr<const GlobalSpace> assemble_c1_constraints(Triangulation mesh) {
    auto base = GlobalSpace::layout(std::move(mesh));
    auto space = std::make_shared<GlobalSpace>(*base);
    const Triangulation& m = space->mesh;

    for (const MeshEdge& e : m.edges()) {
        if (e.boundary()) continue;
        const Point2 a = m.vertices()[e.v0], b = m.vertices()[e.v1];
        const Point2 tangent = b - a;
        const Point2 normal = Point2(-tangent.y, tangent.x) / norm(tangent);
        const SBasis& basis_a = space->bases[e.tri_a];
        const SBasis& basis_b = space->bases[e.tri_b];

        auto add_row = [&](Point2 x, bool derivative) {
            ConstraintRow row;
            row.tri_a = e.tri_a;
            row.tri_b = e.tri_b;
            if (derivative) {
                for (int j = 0; j < 12; ++j) {
                    row.coef_a[j] = basis_a.derivative_one(j, x, normal);
                    row.coef_b[j] = -basis_b.derivative_one(j, x, normal);
                }
            } else {
                const auto va = basis_a.eval(x);
                const auto vb = basis_b.eval(x);
                for (int j = 0; j < 12; ++j) {
                    row.coef_a[j] = va[j];
                    row.coef_b[j] = -vb[j];
                }
            }
            double n2 = 0.0;
            for (int j = 0; j < 12; ++j)
                n2 += row.coef_a[j] * row.coef_a[j] + row.coef_b[j] * row.coef_b[j];
            const double inv = n2 > 0.0 ? 1.0 / std::sqrt(n2) : 1.0;
            for (int j = 0; j < 12; ++j) {
                row.coef_a[j] *= inv;
                row.coef_b[j] *= inv;
            }
            space->constraints.push_back(row);
        };

        for (double t : kValueTs) add_row(a + t * tangent, false);
        for (double t : kDerivTs) add_row(a + t * tangent, true);
    }

    const int rows = static_cast<int>(space->constraints.size());
    const int cols = 12 * m.num_triangles();
    if (rows == 0) {
        space->rank = 0;
        space->spectral_gap = std::numeric_limits<double>::infinity();
        space->constraints_assembled = true;
        return space;
    }

    Eigen::MatrixXd mat = Eigen::MatrixXd::Zero(rows, cols);
    for (int r = 0; r < rows; ++r) {
        const ConstraintRow& row = space->constraints[r];
        for (int j = 0; j < 12; ++j) {
            mat(r, 12 * row.tri_a + j) += row.coef_a[j];
            mat(r, 12 * row.tri_b + j) += row.coef_b[j];
        }
    }

    Eigen::BDCSVD<Eigen::MatrixXd> svd(mat);
    space->singular_values.assign(svd.singularValues().data(),
                                  svd.singularValues().data() +
                                      svd.singularValues().size());
    const double cutoff = 1e-9 * space->singular_values.front();
    int rank = 0;
    while (rank < static_cast<int>(space->singular_values.size()) &&
           space->singular_values[rank] > cutoff)
        ++rank;
    space->rank = rank;
    space->spectral_gap =
        rank < static_cast<int>(space->singular_values.size()) &&
                space->singular_values[rank] > 0.0
            ? space->singular_values[rank - 1] / space->singular_values[rank]
            : std::numeric_limits<double>::infinity();
    space->constraints_assembled = true;
    return space;
}

std::optional<double> GlobalSplineFunction::eval(Point2 x) const {
    const Triangulation& m = space->mesh;
    for (int t = 0; t < m.num_triangles(); ++t) {
        const auto& tri = m.triangles()[t];
        Bary3 b;
        try {
            b = barycentric(m.vertices()[tri[0]], m.vertices()[tri[1]],
                            m.vertices()[tri[2]], x);
        } catch (const std::invalid_argument&) {
            continue;
        }
        if (b.min() < -1e-12) continue;
        const auto vals = space->bases[t].eval(x);
        double total = 0.0;
        for (int j = 0; j < 12; ++j) total += coefficients[t][j] * vals[j];
        return total;
    }
    return std::nullopt;
}

double GlobalSplineFunction::constraint_residual() const {
    double worst = 0.0;
    for (const ConstraintRow& row : space->constraints) {
        double r = 0.0;
        for (int j = 0; j < 12; ++j)
            r += row.coef_a[j] * coefficients[row.tri_a][j] +
                 row.coef_b[j] * coefficients[row.tri_b][j];
        worst = std::max(worst, std::abs(r));
    }
    return worst;
}

GlobalSplineFunction global_quasi_interpolant(
    std::shared_ptr<const GlobalSpace> space,
    const std::function<double(Point2)>& f) {
    GlobalSplineFunction g;
    g.space = space;
    g.coefficients.resize(space->mesh.num_triangles());
    for (int t = 0; t < space->mesh.num_triangles(); ++t) {
        const auto duals = dual_functionals(space->bases[t].frame());
        for (int j = 0; j < 12; ++j) g.coefficients[t][j] = duals[j](f);
    }
    return g;
}

double control_surface_distance(const GlobalSplineFunction& g) {
    double worst = 0.0;
    for (int t = 0; t < g.space->mesh.num_triangles(); ++t) {
        const SBasis& basis = g.space->bases[t];
        const auto vals_at = [&](Point2 x) {
            const auto b = basis.eval(x);
            double total = 0.0;
            for (int j = 0; j < 12; ++j) total += g.coefficients[t][j] * b[j];
            return total;
        };
        for (int j = 0; j < 12; ++j) {
            const auto [a, b] = s_basis_functions()[j].blossom_pair(basis.frame());
            const Point2 gamma = 0.5 * (a + b);
            worst = std::max(worst, std::abs(vals_at(gamma) - g.coefficients[t][j]));
        }
    }
    return worst;
}

ConvergenceResult h2_convergence(const std::function<double(Point2)>& f,
                                 const Triangulation& base, int levels) {
    if (levels < 3)
        throw std::invalid_argument("h2_convergence: need at least 3 levels");

    ConvergenceResult result;
    Triangulation mesh = base;
    double value_scale = 1.0;
    for (int level = 0; level <= levels; ++level) {
        auto space = GlobalSpace::layout(mesh);
        GlobalSplineFunction g = global_quasi_interpolant(space, f);

        if (level == 0) {
            // Sampled reproduction error on the base mesh decides the
            // "exact reproduction" flag.
            double err = 0.0;
            for (int t = 0; t < mesh.num_triangles(); ++t) {
                const Triangle tri = mesh.triangle(t);
                for (const Bary3& b :
                     {Bary3(0.6, 0.25, 0.15), Bary3(0.2, 0.5, 0.3), Bary3(0.3, 0.2, 0.5)}) {
                    const Point2 x = combine(tri.corner(0), tri.corner(1), tri.corner(2), b);
                    const double fx = f(x);
                    value_scale = std::max(value_scale, std::abs(fx));
                    err = std::max(err, std::abs(*g.eval(x) - fx));
                }
            }
            result.exact_reproduction = err <= 1e-10 * value_scale;
        }

        result.rows.push_back({level, mesh.mesh_size(), control_surface_distance(g)});
        if (level < levels) mesh = mesh.refined();
    }

    // Least-squares slope of log(distance) against log(h), ignoring levels
    // where the distance has collapsed to rounding noise.
    std::vector<std::pair<double, double>> pts;
    for (const ConvergenceRow& row : result.rows)
        if (row.distance > 1e-13 * value_scale)
            pts.emplace_back(std::log(row.h), std::log(row.distance));
    if (pts.size() >= 2) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (auto [x, y] : pts) {
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        const double n = static_cast<double>(pts.size());
        const double denom = n * sxx - sx * sx;
        if (std::abs(denom) > 1e-30) {
            result.slope = (n * sxy - sx * sy) / denom;
            result.slope_defined = true;
        }
    }
    return result;
}

}  // namespace ps12
