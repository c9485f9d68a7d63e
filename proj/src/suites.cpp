#include "ps12/suites.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "ps12/geometry.hpp"
#include "ps12/macro_mesh.hpp"
#include "ps12/rng.hpp"
#include "ps12/s_basis.hpp"
#include "ps12/simplex_spline.hpp"

namespace ps12 {

namespace {

PS12Frame unit_frame() {
    return make_frame(Triangle({0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}));
}

Point2 random_interior(Rng& rng, const PS12Frame& f, double margin) {
    for (;;) {
        const Bary3 b = rng.bary();
        if (b.min() < margin) continue;
        return combine(f.v(1), f.v(2), f.v(3), b);
    }
}

/// Random interior point whose distance to every knot line of k is at
/// least line_margin (relative to the multiset scale), and where Q is at
/// least min_value if min_value >= 0.
Point2 generic_point(Rng& rng, const PS12Frame& f, const KnotMultiset& k,
                     const EvalContext& ctx, double line_margin,
                     double min_value = -1.0) {
    for (int attempt = 0; attempt < 100000; ++attempt) {
        const Point2 x = random_interior(rng, f, 0.01);
        if (knot_line_distance(k, x) < line_margin) continue;
        if (min_value >= 0.0 && eval_q(k, x, ctx) < min_value) continue;
        return x;
    }
    throw std::runtime_error("generic_point: rejection sampling failed");
}

const std::vector<MultiplicityVector>& representative_multisets() {
    static const std::vector<MultiplicityVector> sets = [] {
        std::vector<MultiplicityVector> v;
        v.push_back(MultiplicityVector::parse("111000"));      // degree 0
        v.push_back(MultiplicityVector::parse("211000"));      // degree 1
        v.push_back(MultiplicityVector::parse("1110000001"));  // degree 1, centroid knot
        v.push_back(MultiplicityVector::parse("300101"));      // corner generator
        v.push_back(MultiplicityVector::parse("210101"));      // edge generator
        v.push_back(MultiplicityVector::parse("110111"));      // interior generator
        return v;
    }();
    return sets;
}

double pick_tol(const SuiteConfig& cfg, double default_tol) {
    return cfg.tol_override > 0.0 ? cfg.tol_override : default_tol;
}

// ---------------------------------------------------------------- pou --

std::vector<CheckResult> suite_pou(const SuiteConfig& cfg) {
    const PS12Frame f = unit_frame();
    const SBasis basis(f);
    Rng rng(cfg.seed);

    double sum_err = 0.0;
    double min_value = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const Point2 x = random_interior(rng, f, 1e-6);
        const auto vals = basis.eval(x);
        double sum = 0.0;
        for (double v : vals) {
            sum += v;
            min_value = std::min(min_value, v);
        }
        sum_err = std::max(sum_err, std::abs(sum - 1.0));
    }
    // Closed-boundary samples evaluate as limits from inside.
    for (int i = 1; i <= 10; ++i) {
        const auto vals = basis.eval(f.v(i));
        double sum = 0.0;
        for (double v : vals) sum += v;
        sum_err = std::max(sum_err, std::abs(sum - 1.0));
    }

    const double tol = pick_tol(cfg, 1e-12);
    return {
        {"pou/sum_to_one", sum_err, tol, sum_err <= tol, "1e4 interior + 10 vertices"},
        {"pou/nonnegative", -min_value, 1e-14, -min_value <= 1e-14, ""},
    };
}

// ------------------------------------------------------------ marsden --

std::vector<CheckResult> suite_marsden(const SuiteConfig& cfg) {
    const PS12Frame f = unit_frame();
    const SBasis basis(f);
    Rng rng(cfg.seed);

    std::vector<Point2> pts;
    pts.reserve(1000);
    for (int i = 0; i < 1000; ++i) pts.push_back(random_interior(rng, f, 1e-6));

    double random_c_err = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const std::array<double, 3> c{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0),
                                      rng.uniform(-1.0, 1.0)};
        random_c_err = std::max(random_c_err, verify_marsden(basis, c, pts));
    }

    const double ones_err = verify_marsden(basis, {1.0, 1.0, 1.0}, pts);

    // c = (1,0,0): the unsquared left-hand side is the first barycentric
    // coordinate of the macro triangle.
    double lhs_err = 0.0;
    for (const Point2& x : pts) {
        const double lhs = marsden_lhs(f, {1.0, 0.0, 0.0}, x);
        lhs_err = std::max(lhs_err, std::abs(lhs - f.macro_barycentric(x).b1));
    }

    const double tol = pick_tol(cfg, 1e-12);
    return {
        {"marsden/random_c", random_c_err, tol, random_c_err <= tol, "20 random c, 1e3 points"},
        {"marsden/all_ones", ones_err, tol, ones_err <= tol, "partition of unity"},
        {"marsden/linear_lhs", lhs_err, tol, lhs_err <= tol, "c=(1,0,0) gives barycentric b1"},
    };
}

// ----------------------------------------------------------- boundary --

std::vector<CheckResult> suite_boundary(const SuiteConfig& cfg) {
    const PS12Frame f = unit_frame();
    const SBasis basis(f);
    Rng rng(cfg.seed);

    double active_err = 0.0;
    double inactive_err = 0.0;
    const std::array<std::pair<int, int>, 3> edges{{{1, 2}, {2, 3}, {1, 3}}};
    for (const auto& [a, b] : edges) {
        const BoundaryRestriction restr = boundary_restriction(f, a, b);
        const Point2 pa = f.v(a), pb = f.v(b);
        for (int i = 0; i < 1000; ++i) {
            const double t = i < 3 ? std::array<double, 3>{0.0, 0.5, 1.0}[i]
                                   : rng.uniform();
            const Point2 x = pa + t * (pb - pa);
            const auto deboor = restr.eval(t);
            const auto vals = basis.eval(x);
            std::array<bool, 12> is_active{};
            for (int q = 0; q < 4; ++q) {
                is_active[restr.basis_index[q]] = true;
                active_err = std::max(active_err,
                                      std::abs(vals[restr.basis_index[q]] - deboor[q]));
            }
            for (int j = 0; j < 12; ++j)
                if (!is_active[j]) inactive_err = std::max(inactive_err, std::abs(vals[j]));
        }
    }

    const double tol = pick_tol(cfg, 1e-12);
    return {
        {"boundary/match_de_boor", active_err, tol, active_err <= tol,
         "4 active splines vs de Boor, 3 edges x 1e3 params"},
        {"boundary/others_vanish", inactive_err, 1e-14, inactive_err <= 1e-14, ""},
    };
}

// --------------------------------------------------------- smoothness --

struct LineSegment {
    Point2 p, q;  // clipped to the macro triangle
};

/// Clips the infinite line through (a, b) to the closed macro triangle.
std::optional<LineSegment> clip_line_to_macro(const PS12Frame& f, Point2 a, Point2 b) {
    const Point2 d = b - a;
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 3; ++i) {
        const Point2 e0 = f.v(i + 1);
        const Point2 e1 = f.v(i == 2 ? 1 : i + 2);
        const Point2 edge = e1 - e0;
        const double denom = cross(edge, d);
        const double num = cross(edge, e0 - a);
        if (std::abs(denom) < 1e-14 * norm(edge) * norm(d)) {
            if (cross(edge, a - e0) < 0) return std::nullopt;  // parallel, outside
            continue;
        }
        const double t = num / denom;
        if (denom > 0)
            lo = std::max(lo, t);
        else
            hi = std::min(hi, t);
    }
    if (lo >= hi) return std::nullopt;
    return LineSegment{a + lo * d, a + hi * d};
}

bool is_macro_boundary_line(const PS12Frame& f, const KnotLine& line) {
    const double tol = 1e-9 * f.diameter();
    const std::array<std::pair<int, int>, 3> edges{{{1, 2}, {2, 3}, {1, 3}}};
    for (const auto& [a, b] : edges) {
        if (std::abs(line_distance(f.v(a), f.v(b), line.a)) <= tol &&
            std::abs(line_distance(f.v(a), f.v(b), line.b)) <= tol)
            return true;
    }
    return false;
}

std::vector<CheckResult> suite_smoothness(const SuiteConfig& cfg) {
    const PS12Frame f = unit_frame();
    const SBasis basis(f);
    const double diam = f.diameter();
    const double h = cfg.fd_step;       // straddle/gradient step
    const double offset = 5.0 * h;      // distance of the one-sided stencils

    auto gradient = [&](int j, Point2 x) {
        const double gx = (basis.eval_one(j, {x.x + h, x.y}) -
                           basis.eval_one(j, {x.x - h, x.y})) /
                          (2.0 * h);
        const double gy = (basis.eval_one(j, {x.x, x.y + h}) -
                           basis.eval_one(j, {x.x, x.y - h})) /
                          (2.0 * h);
        return Point2{gx, gy};
    };
    auto second_normal = [&](int j, Point2 y, Point2 n) {
        const double hh = 1e-3;
        const double v0 = basis.eval_one(j, y);
        const double vp = basis.eval_one(j, y + hh * n);
        const double vm = basis.eval_one(j, y - hh * n);
        return (vp - 2.0 * v0 + vm) / (hh * hh);
    };

    double grad_jump = 0.0;       // interior m=2 lines: should be ~0
    double min_value_jump = std::numeric_limits<double>::infinity();
    double min_sharp_jump = std::numeric_limits<double>::infinity();
    int continuity_mismatches = 0;

    for (int j = 0; j < 12; ++j) {
        const KnotMultiset& k = basis.knot_multiset(j);
        double fn_value_jump = 0.0;
        double fn_sharp_jump = 0.0;
        bool fn_has_discontinuous_edge = false;

        for (const KnotLine& line : knot_lines(k)) {
            const auto seg = clip_line_to_macro(f, line.a, line.b);
            if (!seg) continue;
            const Point2 dir = seg->q - seg->p;
            if (norm(dir) < 1e-9 * diam) continue;
            const Point2 n = Point2(-dir.y, dir.x) / norm(dir);
            const bool boundary_line = is_macro_boundary_line(f, line);
            const int order = continuity_order(k, line.a, line.b);

            // A handful of straddle stations, clear of the other knot lines.
            std::vector<Point2> stations;
            for (double t : {0.15, 0.3, 0.42, 0.58, 0.7, 0.85}) {
                const Point2 x = seg->p + t * dir;
                bool clear = true;
                for (const KnotLine& other : knot_lines(k)) {
                    if (std::abs(line_distance(other.a, other.b, line.a)) <
                            1e-9 * diam &&
                        std::abs(line_distance(other.a, other.b, line.b)) <
                            1e-9 * diam)
                        continue;  // the line itself
                    if (std::abs(line_distance(other.a, other.b, x)) < 50.0 * h)
                        clear = false;
                }
                if (clear) stations.push_back(x);
            }
            if (stations.empty()) continue;

            if (!boundary_line && line.multiplicity == 2) {
                if (order != 1) ++continuity_mismatches;
                for (const Point2& x : stations) {
                    const Point2 gp = gradient(j, x + offset * n);
                    const Point2 gm = gradient(j, x - offset * n);
                    grad_jump = std::max(grad_jump, norm(gp - gm));
                    fn_sharp_jump = std::max(
                        fn_sharp_jump, std::abs(second_normal(j, x + offset * n, n) -
                                                second_normal(j, x - offset * n, n)));
                }
            } else if (boundary_line && line.multiplicity >= 4) {
                if (order != -1) ++continuity_mismatches;
                fn_has_discontinuous_edge = true;
                for (const Point2& x : stations) {
                    const double vp = basis.eval_one(j, x + offset * n);
                    const double vm = basis.eval_one(j, x - offset * n);
                    fn_value_jump = std::max(fn_value_jump, std::abs(vp - vm));
                }
            }
        }

        if (fn_has_discontinuous_edge)
            min_value_jump = std::min(min_value_jump, fn_value_jump);
        if (fn_sharp_jump > 0.0)
            min_sharp_jump = std::min(min_sharp_jump, fn_sharp_jump);
    }

    const double tol = pick_tol(cfg, 1e-4);
    return {
        {"smoothness/gradient_continuous", grad_jump, tol, grad_jump <= tol,
         "interior knot lines with m=2"},
        {"smoothness/boundary_jump_order_one", min_value_jump, 0.05,
         min_value_jump >= 0.05, "macro edges with m>=4 (value jumps; check is a lower bound)"},
        {"smoothness/rule_sharp", min_sharp_jump, 0.5, min_sharp_jump >= 0.5,
         "2nd-derivative jump across m=2 lines (lower bound)"},
        {"smoothness/predicted_orders", static_cast<double>(continuity_mismatches),
         0.0, continuity_mismatches == 0, "d-m+1 agrees with the measured classes"},
    };
}

// ------------------------------------------------------- independence --

std::vector<CheckResult> suite_independence(const SuiteConfig& cfg) {
    const PS12Frame f = unit_frame();
    const SBasis basis(f);
    const auto report = local_independence_report(basis);
    Rng rng(cfg.seed);

    int bad_active = 0, bad_rank = 0;
    double inactive_leak = 0.0;
    for (const SubtriangleIndependence& entry : report) {
        if (entry.active.size() != 6) ++bad_active;
        if (entry.rank != 6) ++bad_rank;

        // Support characterization: inactive functions vanish on the tile.
        std::array<bool, 12> active{};
        for (int j : entry.active) active[j] = true;
        const Triangle tri = f.subtriangle(entry.subtriangle);
        for (int s = 0; s < 8; ++s) {
            Bary3 b = rng.bary();
            while (b.min() < 0.05) b = rng.bary();
            const Point2 x = combine(tri.corner(0), tri.corner(1), tri.corner(2), b);
            const auto vals = basis.eval(x);
            for (int j = 0; j < 12; ++j)
                if (!active[j]) inactive_leak = std::max(inactive_leak, std::abs(vals[j]));
        }
    }

    return {
        {"independence/active_count_six", static_cast<double>(bad_active), 0.0,
         bad_active == 0, "all 12 subtriangles"},
        {"independence/rank_six", static_cast<double>(bad_rank), 0.0, bad_rank == 0,
         "sampled collocation rank, cutoff 1e-10"},
        {"independence/support_is_hull", inactive_leak, 1e-13, inactive_leak <= 1e-13,
         "inactive functions vanish on the tile"},
    };
}

// ---------------------------------------------------------- stability --

std::vector<CheckResult> suite_stability(const SuiteConfig& cfg) {
    Rng rng(cfg.seed);

    // 50 fixed barycentric nodes, clear of the split's knot lines.
    std::vector<Bary3> nodes;
    while (nodes.size() < 50) {
        const Bary3 b = rng.bary();
        const double m = 0.02;
        if (b.min() < m) continue;
        if (std::abs(b.b1 - b.b2) < m || std::abs(b.b2 - b.b3) < m ||
            std::abs(b.b1 - b.b3) < m)
            continue;
        if (std::abs(b.b1 - 0.5) < m || std::abs(b.b2 - 0.5) < m ||
            std::abs(b.b3 - 0.5) < m)
            continue;
        nodes.push_back(b);
    }

    auto collocation = [&](const Triangle& t) {
        const SBasis basis(make_frame(t));
        std::vector<std::array<double, 12>> mat;
        mat.reserve(nodes.size());
        for (const Bary3& b : nodes)
            mat.push_back(basis.eval(combine(t.corner(0), t.corner(1), t.corner(2), b)));
        return mat;
    };

    const auto reference = collocation(Triangle({0, 0}, {1, 0}, {0, 1}));

    double worst = 0.0;
    double worst_aspect = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        Triangle t = [&] {
            if (trial < 10) {
                // Generic triangle.
                for (;;) {
                    const Point2 a{rng.uniform(-1, 1), rng.uniform(-1, 1)};
                    const Point2 b{rng.uniform(-1, 1), rng.uniform(-1, 1)};
                    const Point2 c{rng.uniform(-1, 1), rng.uniform(-1, 1)};
                    const double ar = signed_area(a, b, c);
                    if (std::abs(ar) < 0.05) continue;
                    return ar > 0 ? Triangle(a, b, c) : Triangle(a, c, b);
                }
            }
            // Thin triangle: aspect ratio from 10 to 1e3, random pose.
            const double aspect = std::pow(10.0, 1.0 + 2.0 * rng.uniform());
            const double len = 0.5 + rng.uniform();
            const double phi = rng.uniform(0.0, 2.0 * M_PI);
            const Point2 shift{rng.uniform(-1, 1), rng.uniform(-1, 1)};
            auto place = [&](double u, double v) {
                const double c = std::cos(phi), s = std::sin(phi);
                return Point2{shift.x + c * u - s * v, shift.y + s * u + c * v};
            };
            return Triangle(place(0, 0), place(len, 0),
                            place(len * rng.uniform(0.25, 0.75), len / aspect));
        }();

        const double base = distance(t.corner(0), t.corner(1));
        const double height = 2.0 * t.area() / base;
        worst_aspect = std::max(worst_aspect, base / height);

        const auto mat = collocation(t);
        for (size_t r = 0; r < nodes.size(); ++r)
            for (int j = 0; j < 12; ++j)
                worst = std::max(worst, std::abs(mat[r][j] - reference[r][j]));
    }

    const double tol = pick_tol(cfg, 1e-12);
    return {
        {"stability/geometry_independence", worst, tol, worst <= tol,
         "50 barycentric nodes, 20 triangles, max aspect " +
             std::to_string(static_cast<int>(worst_aspect))},
    };
}

// ------------------------------------------------------------- oracle --

std::vector<CheckResult> suite_oracle(const SuiteConfig& cfg) {
    const PS12Frame f = unit_frame();
    const EvalContext ctx = EvalContext::for_frame(f);
    Rng rng(cfg.seed);

    double max_z = 0.0;
    int unreliable = 0;
    int idx = 0;
    for (const MultiplicityVector& mv : representative_multisets()) {
        const KnotMultiset k = mv.knots(f);
        const double radius_rel =
            0.02 * std::pow(1e4 / static_cast<double>(cfg.oracle_samples), 0.25);

        std::vector<Point2> pts;
        while (pts.size() < 20) {
            const Point2 x =
                generic_point(rng, f, k, ctx, 2.5 * radius_rel, 0.1);
            pts.push_back(x);
        }
        const auto estimates = eval_geometric_oracle_batch(
            k, pts, ctx, cfg.oracle_samples, cfg.seed + 17 * ++idx);
        for (size_t i = 0; i < pts.size(); ++i) {
            if (!estimates[i].reliable) ++unreliable;
            const double q = eval_q(k, pts[i], ctx);
            const double se = estimates[i].standard_error;
            if (se > 0.0)
                max_z = std::max(max_z, std::abs(q - estimates[i].mean) / se);
            else if (std::abs(q - estimates[i].mean) > 0)
                max_z = std::numeric_limits<double>::infinity();
        }
    }

    return {
        {"oracle/recurrence_vs_geometric", max_z, 3.0, max_z <= 3.0,
         "6 multisets x 20 generic points, z-scores"},
        {"oracle/points_reliable", static_cast<double>(unreliable), 0.0,
         unreliable == 0, ""},
    };
}

// ---------------------------------------------------------- insertion --

std::vector<CheckResult> suite_insertion(const SuiteConfig& cfg) {
    const PS12Frame f = unit_frame();
    const EvalContext ctx = EvalContext::for_frame(f);
    Rng rng(cfg.seed);

    double max_err = 0.0;
    for (const MultiplicityVector& mv : representative_multisets()) {
        const KnotMultiset k = mv.knots(f);
        for (int yi = 0; yi < 10; ++yi) {
            // Uniform in the knot hull by rejection from the macro triangle.
            Point2 y = random_interior(rng, f, 0.02);
            while (!k.contains_in_hull(y)) y = random_interior(rng, f, 0.02);

            const auto terms = insert_knot(k, y);
            const KnotMultiset extended = k.inserted(y);
            for (int i = 0; i < 50; ++i) {
                const Point2 x = generic_point(rng, f, extended, ctx, 1e-7);
                double rhs = 0.0;
                for (const InsertionTerm& term : terms)
                    rhs += term.weight * eval_q(term.multiset, x, ctx);
                max_err = std::max(max_err, std::abs(eval_q(k, x, ctx) - rhs));
            }
        }
    }

    const double tol = pick_tol(cfg, 1e-12);
    return {
        {"insertion/identity", max_err, tol, max_err <= tol,
         "6 multisets x 10 insertions x 50 generic points"},
    };
}

// --------------------------------------------------------- derivative --

std::vector<CheckResult> suite_derivative(const SuiteConfig& cfg) {
    const PS12Frame f = unit_frame();
    const SBasis basis(f);
    Rng rng(cfg.seed);
    const double h = cfg.fd_step;

    double max_err = 0.0;
    double pou_deriv = 0.0;
    for (int j = 0; j < 12; ++j) {
        const KnotMultiset& k = basis.knot_multiset(j);
        for (int i = 0; i < 100; ++i) {
            const Point2 x = generic_point(rng, f, k, basis.context(), 50.0 * h);
            const double phi = rng.uniform(0.0, 2.0 * M_PI);
            const Point2 u{std::cos(phi), std::sin(phi)};
            const double analytic = basis.derivative_one(j, x, u);
            const double fd = (basis.eval_one(j, x + h * u) -
                               basis.eval_one(j, x - h * u)) /
                              (2.0 * h);
            max_err = std::max(max_err, std::abs(analytic - fd));
        }
    }

    // The derivative of the partition of unity vanishes.
    for (int i = 0; i < 200; ++i) {
        const Point2 x = random_interior(rng, f, 0.02);
        bool on_line = false;
        for (int j = 0; j < 12; ++j)
            if (knot_line_distance(basis.knot_multiset(j), x) < 1e-6) on_line = true;
        if (on_line) continue;
        const double phi = rng.uniform(0.0, 2.0 * M_PI);
        const Point2 u{std::cos(phi), std::sin(phi)};
        double sum = 0.0;
        for (int j = 0; j < 12; ++j) sum += basis.derivative_one(j, x, u);
        pou_deriv = std::max(pou_deriv, std::abs(sum));
    }

    const double tol = pick_tol(cfg, 1e-6);
    return {
        {"derivative/matches_central_fd", max_err, tol, max_err <= tol,
         "12 basis functions x 100 generic points"},
        {"derivative/pou_derivative_zero", pou_deriv, 1e-11, pou_deriv <= 1e-11, ""},
    };
}

}  // namespace

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{
        "pou",       "marsden",      "boundary",  "smoothness", "independence",
        "stability", "oracle",       "insertion", "derivative"};
    return names;
}

std::vector<CheckResult> run_suite(const std::string& name,
                                   const SuiteConfig& config) {
    if (name == "pou") return suite_pou(config);
    if (name == "marsden") return suite_marsden(config);
    if (name == "boundary") return suite_boundary(config);
    if (name == "smoothness") return suite_smoothness(config);
    if (name == "independence") return suite_independence(config);
    if (name == "stability") return suite_stability(config);
    if (name == "oracle") return suite_oracle(config);
    if (name == "insertion") return suite_insertion(config);
    if (name == "derivative") return suite_derivative(config);
    throw std::invalid_argument("unknown verification suite: " + name);
}

}  // namespace ps12
