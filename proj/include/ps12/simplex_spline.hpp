#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ps12/geometry.hpp"

namespace ps12 {

/// A multiset of planar knots in a fixed canonical order.  A spline with
/// |K| = d + 3 knots has polynomial degree d.
class KnotMultiset {
public:
    explicit KnotMultiset(std::vector<Point2> knots);

    int size() const { return static_cast<int>(knots_.size()); }
    int degree() const { return size() - 3; }
    const Point2& knot(int i) const { return knots_[i]; }
    std::span<const Point2> knots() const { return knots_; }

    double hull_area() const { return hull_area_; }
    double scale() const { return scale_; }  // bounding-box diagonal

    /// Copy with knot i removed.
    KnotMultiset erased(int i) const;
    /// Copy with y appended.
    KnotMultiset inserted(Point2 y) const;

    bool contains_in_hull(Point2 x) const;

private:
    std::vector<Point2> knots_;
    double hull_area_ = 0.0;
    double scale_ = 0.0;
};

/// A line through at least two distinct knots; m counts the knots on it
/// with multiplicity.  Across such a line the spline has d - m + 1
/// continuous derivatives.
struct KnotLine {
    Point2 a, b;
    int multiplicity = 0;
};

/// All knot lines of the multiset (complete graph on distinct knots,
/// coincident lines merged).
std::vector<KnotLine> knot_lines(const KnotMultiset& k);

/// Smallest normalized distance from x to any knot line, in units of the
/// multiset scale.  Infinity when there are no knot lines.
double knot_line_distance(const KnotMultiset& k, Point2 x);

/// d - m + 1 for the knot line through line_a, line_b.  Throws when the
/// line passes through fewer than two distinct knots.
int continuity_order(const KnotMultiset& k, Point2 line_a, Point2 line_b);

struct EvalContext {
    double normalization_area = 1.0;  // area(PS) in the base-case numerator
    HalfOpenConvention convention{};

    static EvalContext for_frame(const PS12Frame& f,
                                 HalfOpenMode mode = HalfOpenMode::lexicographic) {
        EvalContext ctx;
        ctx.normalization_area = f.macro_area;
        ctx.convention = mode == HalfOpenMode::interior_limit
                             ? HalfOpenConvention::interior_limit(f.centroid())
                             : HalfOpenConvention::lexicographic();
        return ctx;
    }
};

/// Order in which candidate knot triples are scanned.  Both strategies
/// yield the same spline values away from knot lines; keeping two around
/// makes that property testable.
enum class TripleStrategy { first_fit, last_fit };

struct TripleChoice {
    std::array<int, 3> index;     // positions in the multiset
    std::vector<double> weights;  // affine weights over all |K| positions
};

/// First (or last) affinely independent knot triple in canonical order,
/// with the barycentric weights of x placed at the selected positions and
/// zeros elsewhere.
TripleChoice choose_triple(const KnotMultiset& k, Point2 x,
                           TripleStrategy strategy = TripleStrategy::first_fit);

/// Area-normalized simplex spline Q[K](x):
///   0                                     when the knot hull is degenerate,
///   1_[K)(x) * normalization_area/area(K) when |K| = 3,
///   sum_j beta_j(x) Q[K \ v_j](x)         otherwise,
/// with the beta given by choose_triple.
double eval_q(const KnotMultiset& k, Point2 x, const EvalContext& ctx,
              TripleStrategy strategy = TripleStrategy::first_fit);

/// Directional derivative D_u Q[K](x) = d * sum_j alpha_j Q[K \ v_j](x)
/// where the alpha solve sum alpha_j = 0, sum alpha_j v_j = u over the
/// first-fit triple.  Requires degree >= 1; classical only off knot lines.
double directional_derivative(const KnotMultiset& k, Point2 x, Point2 u,
                              const EvalContext& ctx);

struct InsertionTerm {
    double weight;
    KnotMultiset multiset;
};

/// Knot insertion: Q[K] = sum_j w_j Q[(K + y) \ v_j] over the first-fit
/// triple, with w the affine weights of y.  y must lie in the knot hull.
std::vector<InsertionTerm> insert_knot(const KnotMultiset& k, Point2 y);

struct OracleEstimate {
    double mean = 0.0;
    double standard_error = 0.0;
    long samples = 0;
    bool reliable = true;  // false when x sits on a knot line
};

/// Monte Carlo estimate of Q[K](x) straight from the geometric definition:
/// the spline is the density at x of the projection of a uniform sample of
/// the (d+2)-simplex whose vertices project onto the knots, times
/// normalization_area / C(d+2, 2).  Counting happens in a disc of radius
/// 0.02 * scale * (1e4/n)^(1/4) around x.  Deterministic for fixed
/// (seed, n).
OracleEstimate eval_geometric_oracle(const KnotMultiset& k, Point2 x,
                                     const EvalContext& ctx, long n,
                                     std::uint64_t seed);

/// Batch variant sharing one sample stream across all query points.
std::vector<OracleEstimate> eval_geometric_oracle_batch(
    const KnotMultiset& k, std::span<const Point2> xs, const EvalContext& ctx,
    long n, std::uint64_t seed);

}  // namespace ps12
