#pragma once

#include <array>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

namespace ps12 {

/// Relative tolerance deciding when an area counts as zero.  Areas are
/// compared against tol * (bounding-box diagonal)^2 of the points involved.
inline constexpr double kAreaTolFactor = 1e-12;

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    Point2() = default;
    Point2(double px, double py) : x(px), y(py) {
        if (!std::isfinite(px) || !std::isfinite(py))
            throw std::invalid_argument("Point2: coordinates must be finite");
    }
};

inline Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator*(double s, Point2 p) { return {s * p.x, s * p.y}; }
inline Point2 operator/(Point2 p, double s) { return {p.x / s, p.y / s}; }

inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point2 a) { return std::hypot(a.x, a.y); }
inline double distance(Point2 a, Point2 b) { return norm(b - a); }

/// Twice-signed-area free orientation helper: positive when a,b,c are
/// counterclockwise.
inline double signed_area(Point2 a, Point2 b, Point2 c) {
    return 0.5 * cross(b - a, c - a);
}

/// Diagonal of the axis-aligned bounding box of a point set.
double bbox_diagonal(std::span<const Point2> pts);

/// Area of the convex hull of the points.  Returns 0 for fewer than three
/// distinct points or a collinear set.
double hull_area(std::span<const Point2> pts);

/// Barycentric coordinates summing to one.  Construction normalizes the
/// triple; a near-zero sum is rejected.
struct Bary3 {
    double b1 = 0.0, b2 = 0.0, b3 = 0.0;

    Bary3() = default;
    Bary3(double u, double v, double w);

    double operator[](int i) const {
        return i == 0 ? b1 : (i == 1 ? b2 : b3);
    }
    double min() const { return std::min(b1, std::min(b2, b3)); }
};

inline Point2 combine(Point2 p1, Point2 p2, Point2 p3, const Bary3& b) {
    return {b.b1 * p1.x + b.b2 * p2.x + b.b3 * p3.x,
            b.b1 * p1.y + b.b2 * p2.y + b.b3 * p3.y};
}

/// Barycentric coordinates of x with respect to the triangle (p1,p2,p3).
/// Throws std::invalid_argument when the three points are collinear within
/// the area tolerance.
Bary3 barycentric(Point2 p1, Point2 p2, Point2 p3, Point2 x);

/// A strictly counterclockwise, nondegenerate triangle.
class Triangle {
public:
    Triangle(Point2 a, Point2 b, Point2 c);

    const Point2& corner(int i) const { return corners_[i]; }
    const std::array<Point2, 3>& corners() const { return corners_; }
    double area() const { return area_; }

private:
    std::array<Point2, 3> corners_;
    double area_;
};

/// Base-case indicator convention for half-open triangles.
///
/// lexicographic: a boundary edge belongs to the triangle whose inward
/// normal n satisfies n.x < 0, or n.x == 0 and n.y < 0.  Equivalent to
/// deciding membership by an infinitesimal step in direction (-1, -eta),
/// eta -> 0+, so plane tilings cover every point exactly once.
///
/// interior_limit: membership is decided by an infinitesimal step towards
/// `interior_target` (ties broken lexicographically), which evaluates
/// splines on the boundary of a macro triangle as limits from its interior.
enum class HalfOpenMode { lexicographic, interior_limit };

struct HalfOpenConvention {
    HalfOpenMode mode = HalfOpenMode::lexicographic;
    Point2 interior_target{};

    static HalfOpenConvention lexicographic() { return {}; }
    static HalfOpenConvention interior_limit(Point2 target) {
        return {HalfOpenMode::interior_limit, target};
    }
};

/// True iff x lies in the half-open triangle [p1,p2,p3) under the given
/// convention.  The corners may wind either way; orientation is normalized
/// internally.  Interiors are always included.
bool half_open_contains(Point2 p1, Point2 p2, Point2 p3, Point2 x,
                        const HalfOpenConvention& conv);

/// The 10 vertices of the 12-split of a macro triangle.
///
///   v1,v2,v3   macro corners (counterclockwise)
///   v4,v5,v6   midpoints of edges (v1,v2), (v2,v3), (v1,v3)
///   v7,v8,v9   midpoints of the medial edges (v4,v6), (v4,v5), (v5,v6);
///              they sit halfway along the medians from v1, v2, v3
///   v10        centroid
struct PS12Frame {
    std::array<Point2, 10> vertices;
    double macro_area = 0.0;

    /// 1-based accessor matching the vertex numbering above.
    const Point2& v(int i) const { return vertices[i - 1]; }

    Point2 centroid() const { return vertices[9]; }
    double diameter() const;
    Bary3 macro_barycentric(Point2 x) const {
        return barycentric(vertices[0], vertices[1], vertices[2], x);
    }

    /// Corner indices (1-based vertex numbers) of subtriangle id in 1..12.
    /// 1..6 are the split corner triangles, 7..12 the fan around the
    /// centroid; all counterclockwise.
    static const std::array<int, 3>& subtriangle_vertices(int id);
    Triangle subtriangle(int id) const;
};

PS12Frame make_frame(const Triangle& t);

/// One of the nine knot lines of the 12-split, identified by two defining
/// vertices (1-based).
struct FrameLine {
    enum class Kind { macro_edge, medial, median };
    int a = 0;
    int b = 0;
    Kind kind = Kind::macro_edge;
};

/// The nine knot lines: macro edges (1,2),(2,3),(1,3); medial edges
/// (4,5),(5,6),(4,6); medians (1,5),(2,6),(3,4).
std::span<const FrameLine> frame_lines();

struct LocateResult {
    /// Containing subtriangle in 1..12, or 0 when none claims x (x outside
    /// the macro triangle, or on a boundary part the lexicographic
    /// convention assigns to a neighbouring tile).
    int subtriangle = 0;
    /// x lies in the closed macro triangle.
    bool inside_closed = false;
    /// Knot lines passing through x (within tolerance).
    std::vector<FrameLine> on_lines;
};

LocateResult locate(const PS12Frame& frame, Point2 x,
                    const HalfOpenConvention& conv);

/// Signed distance of x from the line through a and b, normalized by |b-a|.
inline double line_distance(Point2 a, Point2 b, Point2 x) {
    const double len = distance(a, b);
    return len > 0 ? cross(b - a, x - a) / len : distance(a, x);
}

}  // namespace ps12
