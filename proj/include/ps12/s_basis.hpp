#pragma once

#include <array>
#include <functional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ps12/geometry.hpp"
#include "ps12/simplex_spline.hpp"

namespace ps12 {

/// Knot multiplicities over the 10 numbered vertices of a 12-split frame.
class MultiplicityVector {
public:
    MultiplicityVector() { m_.fill(0); }
    explicit MultiplicityVector(const std::array<int, 10>& m);

    /// Accepts 6 digits (vertices 1..6, the graphical notation) or 10.
    static MultiplicityVector parse(std::string_view digits);

    int operator[](int vertex_1based) const { return m_[vertex_1based - 1]; }
    int total() const;
    std::string digits() const;  // always 10 characters

    /// Knots in canonical order: v1 repeated m1 times, then v2, ...
    KnotMultiset knots(const PS12Frame& frame) const;

    /// Image under a vertex permutation (perm[i] is the 1-based image of
    /// vertex i+1).
    MultiplicityVector permuted(const std::array<int, 10>& perm) const;

    bool operator==(const MultiplicityVector&) const = default;
    auto operator<=>(const MultiplicityVector&) const = default;

private:
    std::array<int, 10> m_;
};

/// A corner permutation: images of corners 1, 2, 3.
using CornerPermutation = std::array<int, 3>;

/// The six elements of S3 in the fixed enumeration
/// id, (123), (132), (12), (23), (13).
std::span<const CornerPermutation> s3_elements();

/// The unique extension of a corner permutation to the 10 split vertices
/// that commutes with the midpoint and centroid equations.
std::array<int, 10> s3_induced_permutation(const CornerPermutation& g);

/// An S3-orbit element: an optional numeric scale, an optional symbolic
/// coefficient monomial (product of c_i factors, stored as sorted 1-based
/// vertex indices), and a multiplicity vector.
struct SymmetricItem {
    double scale = 1.0;
    std::vector<int> coeff_factors;
    MultiplicityVector mult;

    bool operator==(const SymmetricItem&) const = default;
};

/// The set of images of the item under all six symmetries, deduplicated,
/// in the order first produced by the fixed group enumeration.
std::vector<SymmetricItem> orbit(const SymmetricItem& item);

enum class BasisClass { corner, edge, interior };

/// One of the 12 S-basis splines.  The scale multiplies the raw simplex
/// spline: 1/4 for corner, 1/2 for edge, 3/4 for interior class.
struct SBasisFunction {
    BasisClass cls;
    int corner = 0;    // corner class: the corner; edge class: the corner end
    int midpoint = 0;  // edge/interior class: the edge midpoint vertex
    double scale = 0.0;
    MultiplicityVector mult;

    /// The two polar-form points whose product appears as this function's
    /// Marsden coefficient: (v_j, v_j) for corner j, (v_a, v_m) for edge
    /// (a, m), (v_m, v_10) for interior m.
    std::pair<Point2, Point2> blossom_pair(const PS12Frame& frame) const;

    std::string label() const;  // "corner1", "edge14", "interior4", ...
};

/// The 12 basis functions in canonical order: corners 1,2,3; edges in the
/// S3-orbit order of (1,4); interiors in the orbit order of 4.
const std::array<SBasisFunction, 12>& s_basis_functions();

/// Index of the basis function with the given label; -1 if unknown.
int basis_index(std::string_view label);

/// The S-basis bound to a frame.  Evaluation uses interior-limit mode, so
/// values on the macro boundary are limits from inside; points outside the
/// closed macro triangle evaluate to zero.
class SBasis {
public:
    explicit SBasis(const PS12Frame& frame);

    const PS12Frame& frame() const { return frame_; }
    const std::array<SBasisFunction, 12>& functions() const {
        return s_basis_functions();
    }

    std::array<double, 12> eval(Point2 x) const;
    double eval_one(int j, Point2 x) const;

    /// Directional derivative of basis function j at x (off knot lines).
    double derivative_one(int j, Point2 x, Point2 u) const;

    const KnotMultiset& knot_multiset(int j) const { return knots_[j]; }
    const EvalContext& context() const { return ctx_; }

private:
    PS12Frame frame_;
    EvalContext ctx_;
    std::vector<KnotMultiset> knots_;  // 12 entries, canonical order
};

inline SBasis s_basis(const PS12Frame& frame) { return SBasis(frame); }

/// Normalized quadratic B-spline on four nondecreasing knots, evaluated by
/// the de Boor recurrence.  Independent of the bivariate machinery; serves
/// as the oracle for boundary restrictions.  Values at the support ends
/// are one-sided limits from inside the support.
double univariate_bspline(const std::array<double, 4>& knots, double t);

/// The four basis functions that survive on a macro edge, with their knot
/// vectors in the edge parameter t in [0, 1], ordered along the edge.
struct BoundaryRestriction {
    std::array<int, 4> basis_index;              // canonical indices
    std::array<std::array<double, 4>, 4> knots;  // t-space knot vectors

    /// De Boor values of the four univariate B-splines at parameter t.
    std::array<double, 4> eval(double t) const;
};

/// edge must join two macro corners (1, 2, or 3).
BoundaryRestriction boundary_restriction(const PS12Frame& frame, int corner_a,
                                         int corner_b);

/// c4..c10 from c1..c3 by the midpoint and centroid averaging rules.
std::array<double, 10> extend_coefficients(const std::array<double, 3>& c);

/// Left-hand side of the Marsden identity before squaring is applied:
/// c1 Q[v1^2 v2 v3] + c2 Q[v1 v2^2 v3] + c3 Q[v1 v2 v3^2], which equals the
/// linear polynomial with barycentric coefficients c on the macro triangle.
double marsden_lhs(const PS12Frame& frame, const std::array<double, 3>& c,
                   Point2 x);

/// Marsden coefficient of one basis function: c_j^2, c_a c_m, or c_m c_10.
double marsden_coefficient(const std::array<double, 3>& c,
                           const SBasisFunction& b);

/// max |lhs^2 - sum_j coeff_j B_j| over the sample points.
double verify_marsden(const SBasis& basis, const std::array<double, 3>& c,
                      std::span<const Point2> samples);

/// Polar-form point functional  f -> 2 f((a+b)/2) - (f(a) + f(b)) / 2.
/// Agrees with the quadratic blossom at (a, b), hence reproduces quadratics
/// through the Marsden coefficients.
struct DualFunctional {
    Point2 a, b;

    double operator()(const std::function<double(Point2)>& f) const {
        return 2.0 * f(0.5 * (a + b)) - 0.5 * (f(a) + f(b));
    }
};

std::array<DualFunctional, 12> dual_functionals(const PS12Frame& frame);

/// A spline on one frame: 12 coefficients in canonical basis order.
struct SplineFunction {
    SBasis basis;
    std::array<double, 12> coefficients{};

    double eval(Point2 x) const;
};

/// Coefficients lambda_j(f); exact on quadratic polynomials.
SplineFunction quasi_interpolant(const PS12Frame& frame,
                                 const std::function<double(Point2)>& f);

struct SubtriangleIndependence {
    int subtriangle = 0;        // 1..12
    std::vector<int> active;    // canonical indices of basis functions
                                // not identically zero there
    int rank = 0;               // rank of sampled restrictions
    double gap = 0.0;           // smallest kept / largest dropped singular value
};

/// Active basis functions and the numerical rank of their restrictions on
/// each subtriangle, sampled at interior points (singular-value cutoff
/// 1e-10 relative).
std::array<SubtriangleIndependence, 12> local_independence_report(
    const SBasis& basis, int samples_per_triangle = 16);

}  // namespace ps12
