#include "ps12/simplex_spline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ps12/rng.hpp"

namespace ps12 {

KnotMultiset::KnotMultiset(std::vector<Point2> knots) : knots_(std::move(knots)) {
    if (knots_.size() < 3)
        throw std::invalid_argument("KnotMultiset: need at least 3 knots");
    hull_area_ = ps12::hull_area(knots_);
    scale_ = bbox_diagonal(knots_);
}

KnotMultiset KnotMultiset::erased(int i) const {
    std::vector<Point2> k = knots_;
    k.erase(k.begin() + i);
    return KnotMultiset(std::move(k));
}

KnotMultiset KnotMultiset::inserted(Point2 y) const {
    std::vector<Point2> k = knots_;
    k.push_back(y);
    return KnotMultiset(std::move(k));
}

bool KnotMultiset::contains_in_hull(Point2 x) const {
    // x is in the hull iff adding it does not grow the hull area.
    std::vector<Point2> k = knots_;
    k.push_back(x);
    const double grown = ps12::hull_area(k);
    return grown <= hull_area_ * (1.0 + 1e-9) + 1e-12 * scale_ * scale_;
}

namespace {

bool same_point(Point2 a, Point2 b, double tol) {
    return distance(a, b) <= tol;
}

bool on_line(Point2 a, Point2 b, Point2 x, double tol) {
    return std::abs(line_distance(a, b, x)) <= tol;
}

}  // namespace

std::vector<KnotLine> knot_lines(const KnotMultiset& k) {
    const double tol = std::max(1e-12 * k.scale(), 1e-300);
    std::vector<Point2> distinct;
    std::vector<int> mult;
    for (const Point2& p : k.knots()) {
        bool found = false;
        for (size_t i = 0; i < distinct.size(); ++i) {
            if (same_point(distinct[i], p, tol)) {
                ++mult[i];
                found = true;
                break;
            }
        }
        if (!found) {
            distinct.push_back(p);
            mult.push_back(1);
        }
    }

    std::vector<KnotLine> lines;
    for (size_t i = 0; i < distinct.size(); ++i) {
        for (size_t j = i + 1; j < distinct.size(); ++j) {
            bool dup = false;
            for (const KnotLine& l : lines) {
                if (on_line(l.a, l.b, distinct[i], tol) &&
                    on_line(l.a, l.b, distinct[j], tol)) {
                    dup = true;
                    break;
                }
            }
            if (dup) continue;
            KnotLine line{distinct[i], distinct[j], 0};
            for (size_t t = 0; t < distinct.size(); ++t)
                if (on_line(line.a, line.b, distinct[t], tol)) line.multiplicity += mult[t];
            lines.push_back(line);
        }
    }
    return lines;
}

double knot_line_distance(const KnotMultiset& k, Point2 x) {
    double best = std::numeric_limits<double>::infinity();
    for (const KnotLine& l : knot_lines(k))
        best = std::min(best, std::abs(line_distance(l.a, l.b, x)) / k.scale());
    return best;
}

int continuity_order(const KnotMultiset& k, Point2 line_a, Point2 line_b) {
    const double tol = 1e-12 * std::max(k.scale(), distance(line_a, line_b));
    if (distance(line_a, line_b) <= tol)
        throw std::invalid_argument("continuity_order: degenerate line");
    int m = 0;
    int distinct_on_line = 0;
    std::vector<Point2> seen;
    for (const Point2& p : k.knots()) {
        if (!on_line(line_a, line_b, p, tol)) continue;
        ++m;
        bool is_new = true;
        for (const Point2& q : seen)
            if (same_point(p, q, tol)) {
                is_new = false;
                break;
            }
        if (is_new) {
            seen.push_back(p);
            ++distinct_on_line;
        }
    }
    if (distinct_on_line < 2)
        throw std::invalid_argument(
            "continuity_order: line passes through fewer than two distinct knots");
    return k.degree() - m + 1;
}

TripleChoice choose_triple(const KnotMultiset& k, Point2 x,
                           TripleStrategy strategy) {
    const int n = k.size();
    const double tol = 2.0 * kAreaTolFactor * k.scale() * k.scale();
    if (k.hull_area() <= 0.0)
        throw std::invalid_argument("choose_triple: degenerate knot hull");

    auto try_triple = [&](int i, int j, int l) -> std::optional<TripleChoice> {
        if (std::abs(cross(k.knot(j) - k.knot(i), k.knot(l) - k.knot(i))) <= tol)
            return std::nullopt;
        TripleChoice c;
        c.index = {i, j, l};
        c.weights.assign(n, 0.0);
        const Bary3 b = barycentric(k.knot(i), k.knot(j), k.knot(l), x);
        c.weights[i] = b.b1;
        c.weights[j] = b.b2;
        c.weights[l] = b.b3;
        return c;
    };

    if (strategy == TripleStrategy::first_fit) {
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                for (int l = j + 1; l < n; ++l)
                    if (auto c = try_triple(i, j, l)) return *c;
    } else {
        for (int l = n - 1; l >= 2; --l)
            for (int j = l - 1; j >= 1; --j)
                for (int i = j - 1; i >= 0; --i)
                    if (auto c = try_triple(i, j, l)) return *c;
    }
    throw std::logic_error("choose_triple: no affinely independent triple found");
}

namespace {

double eval_q_impl(const KnotMultiset& k, Point2 x, const EvalContext& ctx,
                   TripleStrategy strategy) {
    if (k.hull_area() <= 0.0) return 0.0;
    if (k.size() == 3) {
        return half_open_contains(k.knot(0), k.knot(1), k.knot(2), x,
                                  ctx.convention)
                   ? ctx.normalization_area / k.hull_area()
                   : 0.0;
    }
    const TripleChoice c = choose_triple(k, x, strategy);
    double total = 0.0;
    for (int pos : c.index) {
        const double w = c.weights[pos];
        if (w == 0.0) continue;
        total += w * eval_q_impl(k.erased(pos), x, ctx, strategy);
    }
    return total;
}

}  // namespace

double eval_q(const KnotMultiset& k, Point2 x, const EvalContext& ctx,
              TripleStrategy strategy) {
    if (!k.contains_in_hull(x)) return 0.0;
    return eval_q_impl(k, x, ctx, strategy);
}

double directional_derivative(const KnotMultiset& k, Point2 x, Point2 u,
                              const EvalContext& ctx) {
    const int d = k.degree();
    if (d < 1)
        throw std::invalid_argument(
            "directional_derivative: degree 0 splines have no classical derivative");
    const TripleChoice c = choose_triple(k, x, TripleStrategy::first_fit);
    const Point2 a = k.knot(c.index[0]);
    const Point2 b = k.knot(c.index[1]);
    const Point2 p = k.knot(c.index[2]);

    // Solve sum alpha = 0, sum alpha_i v_i = u on the triple; the alpha are
    // the directional derivatives of the triple's barycentric coordinates.
    const double det = cross(b - a, p - a);
    const double alpha2 = cross(u, p - a) / det;
    const double alpha3 = cross(b - a, u) / det;
    const double alpha1 = -alpha2 - alpha3;

    double total = 0.0;
    const std::array<double, 3> alpha{alpha1, alpha2, alpha3};
    for (int i = 0; i < 3; ++i) {
        if (alpha[i] == 0.0) continue;
        total += alpha[i] * eval_q(k.erased(c.index[i]), x, ctx);
    }
    return d * total;
}

std::vector<InsertionTerm> insert_knot(const KnotMultiset& k, Point2 y) {
    if (k.hull_area() <= 0.0)
        throw std::invalid_argument("insert_knot: degenerate knot hull");
    if (!k.contains_in_hull(y))
        throw std::invalid_argument("insert_knot: point outside the knot hull");

    const TripleChoice c = choose_triple(k, y, TripleStrategy::first_fit);
    std::vector<InsertionTerm> terms;
    terms.reserve(3);
    const KnotMultiset extended = k.inserted(y);
    for (int pos : c.index)
        terms.push_back({c.weights[pos], extended.erased(pos)});
    return terms;
}

namespace {

double binom2(int n) { return 0.5 * n * (n - 1); }  // C(n, 2)

}  // namespace

std::vector<OracleEstimate> eval_geometric_oracle_batch(
    const KnotMultiset& k, std::span<const Point2> xs, const EvalContext& ctx,
    long n, std::uint64_t seed) {
    if (k.hull_area() <= 0.0)
        throw std::invalid_argument("geometric oracle: degenerate knot hull");
    if (n < 10000)
        throw std::invalid_argument("geometric oracle: need at least 1e4 samples");

    const int m = k.size();
    const double radius =
        0.02 * k.scale() * std::pow(1e4 / static_cast<double>(n), 0.25);
    const double r2 = radius * radius;
    const double disc_area = M_PI * r2;
    // Density of the projected uniform sample equals the unit-integral
    // simplex spline; Q carries an extra 1 / C(d+2, 2).
    const double scale = ctx.normalization_area / binom2(k.degree() + 2);

    std::vector<long> counts(xs.size(), 0);
    Rng rng(seed);
    std::vector<double> lambda(m);
    for (long s = 0; s < n; ++s) {
        double sum = 0.0;
        for (int i = 0; i < m; ++i) {
            lambda[i] = rng.exponential();
            sum += lambda[i];
        }
        double px = 0.0, py = 0.0;
        for (int i = 0; i < m; ++i) {
            const double w = lambda[i] / sum;
            px += w * k.knot(i).x;
            py += w * k.knot(i).y;
        }
        for (size_t q = 0; q < xs.size(); ++q) {
            const double dx = px - xs[q].x, dy = py - xs[q].y;
            if (dx * dx + dy * dy <= r2) ++counts[q];
        }
    }

    std::vector<OracleEstimate> out(xs.size());
    const double line_tol = 1.5 * radius / k.scale();
    for (size_t q = 0; q < xs.size(); ++q) {
        const double p = static_cast<double>(counts[q]) / static_cast<double>(n);
        OracleEstimate e;
        e.samples = n;
        e.mean = p / disc_area * scale;
        e.standard_error =
            std::sqrt(p * (1.0 - p) / static_cast<double>(n)) / disc_area * scale;
        e.reliable = knot_line_distance(k, xs[q]) > line_tol;
        out[q] = e;
    }
    return out;
}

OracleEstimate eval_geometric_oracle(const KnotMultiset& k, Point2 x,
                                     const EvalContext& ctx, long n,
                                     std::uint64_t seed) {
    const std::array<Point2, 1> xs{x};
    return eval_geometric_oracle_batch(k, xs, ctx, n, seed)[0];
}

}  // namespace ps12
