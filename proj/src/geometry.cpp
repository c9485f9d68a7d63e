#include "ps12/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace ps12 {

double bbox_diagonal(std::span<const Point2> pts) {
    if (pts.empty()) return 0.0;
    double xmin = pts[0].x, xmax = pts[0].x;
    double ymin = pts[0].y, ymax = pts[0].y;
    for (const Point2& p : pts) {
        xmin = std::min(xmin, p.x);
        xmax = std::max(xmax, p.x);
        ymin = std::min(ymin, p.y);
        ymax = std::max(ymax, p.y);
    }
    return std::hypot(xmax - xmin, ymax - ymin);
}

double hull_area(std::span<const Point2> pts) {
    std::vector<Point2> p(pts.begin(), pts.end());
    std::sort(p.begin(), p.end(), [](Point2 a, Point2 b) {
        return a.x < b.x || (a.x == b.x && a.y < b.y);
    });
    p.erase(std::unique(p.begin(), p.end(),
                        [](Point2 a, Point2 b) { return a.x == b.x && a.y == b.y; }),
            p.end());
    const size_t n = p.size();
    if (n < 3) return 0.0;

    // Monotone chain; lower then upper hull.
    std::vector<Point2> hull(2 * n);
    size_t k = 0;
    for (size_t i = 0; i < n; ++i) {
        while (k >= 2 && cross(hull[k - 1] - hull[k - 2], p[i] - hull[k - 2]) <= 0)
            --k;
        hull[k++] = p[i];
    }
    for (size_t i = n - 1, lower = k + 1; i-- > 0;) {
        while (k >= lower && cross(hull[k - 1] - hull[k - 2], p[i] - hull[k - 2]) <= 0)
            --k;
        hull[k++] = p[i];
    }
    hull.resize(k > 1 ? k - 1 : 0);
    if (hull.size() < 3) return 0.0;

    double twice_area = 0.0;
    for (size_t i = 0; i < hull.size(); ++i) {
        const Point2& a = hull[i];
        const Point2& b = hull[(i + 1) % hull.size()];
        twice_area += cross(a, b);
    }
    const double area = 0.5 * std::abs(twice_area);
    const double diag = bbox_diagonal(pts);
    return area > kAreaTolFactor * diag * diag ? area : 0.0;
}

Bary3::Bary3(double u, double v, double w) {
    const double s = u + v + w;
    const double scale = std::abs(u) + std::abs(v) + std::abs(w);
    if (!(std::abs(s) > 1e-12 * std::max(scale, 1.0)))
        throw std::invalid_argument("Bary3: coordinates sum to zero");
    b1 = u / s;
    b2 = v / s;
    b3 = w / s;
}

Bary3 barycentric(Point2 p1, Point2 p2, Point2 p3, Point2 x) {
    const double twice = cross(p2 - p1, p3 - p1);
    const std::array<Point2, 3> corners{p1, p2, p3};
    const double diag = bbox_diagonal(corners);
    if (std::abs(twice) <= 2.0 * kAreaTolFactor * diag * diag)
        throw std::invalid_argument("barycentric: collinear reference points");
    const double u = cross(p2 - x, p3 - x);
    const double v = cross(p3 - x, p1 - x);
    const double w = cross(p1 - x, p2 - x);
    return {u / twice, v / twice, w / twice};
}

Triangle::Triangle(Point2 a, Point2 b, Point2 c) : corners_{a, b, c} {
    const double twice = cross(b - a, c - a);
    const double diag = bbox_diagonal(corners_);
    if (!(twice > 2.0 * kAreaTolFactor * diag * diag))
        throw std::invalid_argument(
            "Triangle: corners must be counterclockwise and nondegenerate");
    area_ = 0.5 * twice;
}

namespace {

// Decides half-open membership for a point sitting exactly on the line of
// a counterclockwise edge with direction e.  True when an infinitesimal
// step in direction (-1, -eta) enters the positive side of the edge.
bool lexicographic_on_edge(Point2 e) {
    const double scale = std::abs(e.x) + std::abs(e.y);
    if (std::abs(e.y) > 1e-14 * scale) return e.y > 0;
    return e.x < 0;
}

}  // namespace

bool half_open_contains(Point2 p1, Point2 p2, Point2 p3, Point2 x,
                        const HalfOpenConvention& conv) {
    if (cross(p2 - p1, p3 - p1) < 0) std::swap(p2, p3);
    const std::array<Point2, 3> c{p1, p2, p3};
    const double diag = bbox_diagonal(c);
    const double tol = 2.0 * kAreaTolFactor * diag * diag;

    for (int i = 0; i < 3; ++i) {
        const Point2 a = c[i];
        const Point2 e = c[(i + 1) % 3] - a;
        const double s = cross(e, x - a);
        if (s > tol) continue;   // strictly inside this edge's half-plane
        if (s < -tol) return false;

        // On the edge line: the perturbation direction decides.
        if (conv.mode == HalfOpenMode::interior_limit) {
            const Point2 d = conv.interior_target - x;
            const double c1 = cross(e, d);
            const double eps = 1e-14 * (std::abs(e.x) + std::abs(e.y)) *
                               (std::abs(d.x) + std::abs(d.y));
            if (c1 > eps) continue;
            if (c1 < -eps) return false;
            // Perturbation parallel to the edge (or zero): lexicographic tie-break.
        }
        if (!lexicographic_on_edge(e)) return false;
    }
    return true;
}

PS12Frame make_frame(const Triangle& t) {
    PS12Frame f;
    const Point2 v1 = t.corner(0), v2 = t.corner(1), v3 = t.corner(2);
    f.vertices[0] = v1;
    f.vertices[1] = v2;
    f.vertices[2] = v3;
    f.vertices[3] = 0.5 * (v1 + v2);
    f.vertices[4] = 0.5 * (v2 + v3);
    f.vertices[5] = 0.5 * (v1 + v3);
    f.vertices[6] = 0.5 * (f.vertices[3] + f.vertices[5]);
    f.vertices[7] = 0.5 * (f.vertices[3] + f.vertices[4]);
    f.vertices[8] = 0.5 * (f.vertices[4] + f.vertices[5]);
    f.vertices[9] = (1.0 / 3.0) * (v1 + v2 + v3);
    f.macro_area = t.area();
    return f;
}

double PS12Frame::diameter() const {
    return std::max({distance(vertices[0], vertices[1]),
                     distance(vertices[1], vertices[2]),
                     distance(vertices[0], vertices[2])});
}

const std::array<int, 3>& PS12Frame::subtriangle_vertices(int id) {
    static const std::array<std::array<int, 3>, 12> table{{
        {1, 4, 7},  {1, 7, 6},   // corner v1
        {2, 5, 8},  {2, 8, 4},   // corner v2
        {3, 6, 9},  {3, 9, 5},   // corner v3
        {4, 8, 10}, {8, 5, 10},  // fan around the centroid
        {5, 9, 10}, {9, 6, 10},
        {6, 7, 10}, {7, 4, 10},
    }};
    if (id < 1 || id > 12)
        throw std::invalid_argument("subtriangle id must be in 1..12");
    return table[id - 1];
}

Triangle PS12Frame::subtriangle(int id) const {
    const auto& idx = subtriangle_vertices(id);
    return Triangle(v(idx[0]), v(idx[1]), v(idx[2]));
}

std::span<const FrameLine> frame_lines() {
    using K = FrameLine::Kind;
    static const std::array<FrameLine, 9> lines{{
        {1, 2, K::macro_edge},
        {2, 3, K::macro_edge},
        {1, 3, K::macro_edge},
        {4, 5, K::medial},
        {5, 6, K::medial},
        {4, 6, K::medial},
        {1, 5, K::median},
        {2, 6, K::median},
        {3, 4, K::median},
    }};
    return lines;
}

LocateResult locate(const PS12Frame& frame, Point2 x,
                    const HalfOpenConvention& conv) {
    LocateResult res;
    const double tol = kAreaTolFactor * frame.diameter() * frame.diameter();

    const double a1 = signed_area(frame.v(1), frame.v(2), x);
    const double a2 = signed_area(frame.v(2), frame.v(3), x);
    const double a3 = signed_area(frame.v(3), frame.v(1), x);
    res.inside_closed = a1 >= -tol && a2 >= -tol && a3 >= -tol;
    if (!res.inside_closed) return res;

    for (int id = 1; id <= 12; ++id) {
        const auto& idx = PS12Frame::subtriangle_vertices(id);
        if (half_open_contains(frame.v(idx[0]), frame.v(idx[1]), frame.v(idx[2]),
                               x, conv)) {
            res.subtriangle = id;
            break;
        }
    }

    const double dist_tol = 1e-12 * frame.diameter();
    for (const FrameLine& line : frame_lines()) {
        if (std::abs(line_distance(frame.v(line.a), frame.v(line.b), x)) <= dist_tol)
            res.on_lines.push_back(line);
    }
    return res;
}

}  // namespace ps12
