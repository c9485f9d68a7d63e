#include <doctest.h>

#include <cmath>
#include <set>

#include "ps12/geometry.hpp"
#include "ps12/rng.hpp"

using namespace ps12;

namespace {

PS12Frame unit_frame() {
    return make_frame(Triangle({0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}));
}

}  // namespace

TEST_CASE("Point2 rejects non-finite coordinates") {
    CHECK_THROWS_AS(Point2(std::nan(""), 0.0), std::invalid_argument);
    CHECK_THROWS_AS(Point2(0.0, std::numeric_limits<double>::infinity()),
                    std::invalid_argument);
}

TEST_CASE("Triangle requires counterclockwise nondegenerate corners") {
    CHECK_NOTHROW(Triangle({0, 0}, {1, 0}, {0, 1}));
    CHECK_THROWS_AS(Triangle({0, 0}, {0, 1}, {1, 0}), std::invalid_argument);  // flipped
    CHECK_THROWS_AS(Triangle({0, 0}, {1, 0}, {2, 0}), std::invalid_argument);  // collinear
    CHECK_THROWS_AS(Triangle({0, 0}, {1, 0}, {0.5, 1e-15}), std::invalid_argument);
}

TEST_CASE("make_frame places the 10 vertices") {
    const PS12Frame f = unit_frame();
    CHECK(f.v(4).x == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(f.v(4).y == doctest::Approx(0.0));
    CHECK(f.v(6).x == doctest::Approx(0.0));
    CHECK(f.v(6).y == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(f.v(10).x == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    CHECK(f.v(10).y == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    CHECK(f.v(7).x == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(f.v(7).y == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(f.macro_area == doctest::Approx(0.5).epsilon(1e-14));

    // Midpoint and centroid identities on a generic triangle.
    const PS12Frame g = make_frame(Triangle({-0.3, 0.2}, {1.7, -0.4}, {0.9, 2.1}));
    for (auto [mid, a, b] :
         {std::array<int, 3>{4, 1, 2}, {5, 2, 3}, {6, 1, 3}, {7, 4, 6}, {8, 4, 5}, {9, 5, 6}}) {
        CHECK(distance(g.v(mid), 0.5 * (g.v(a) + g.v(b))) <= 1e-14 * g.diameter());
    }
    const Point2 centroid = (1.0 / 3.0) * (g.v(1) + g.v(2) + g.v(3));
    CHECK(distance(g.v(10), centroid) <= 1e-14 * g.diameter());
}

TEST_CASE("make_frame is affinely equivariant") {
    Rng rng(7);
    const Triangle base({0.1, -0.2}, {1.3, 0.4}, {0.2, 1.1});
    const PS12Frame f = make_frame(base);
    for (int trial = 0; trial < 20; ++trial) {
        // Random nondegenerate affine map with positive determinant.
        double a, b, c, d;
        do {
            a = rng.uniform(-2, 2);
            b = rng.uniform(-2, 2);
            c = rng.uniform(-2, 2);
            d = rng.uniform(-2, 2);
        } while (a * d - b * c < 0.1);
        const Point2 shift{rng.uniform(-3, 3), rng.uniform(-3, 3)};
        auto map = [&](Point2 p) {
            return Point2{a * p.x + b * p.y + shift.x, c * p.x + d * p.y + shift.y};
        };
        const PS12Frame g = make_frame(
            Triangle(map(base.corner(0)), map(base.corner(1)), map(base.corner(2))));
        for (int i = 1; i <= 10; ++i)
            CHECK(distance(g.v(i), map(f.v(i))) <= 1e-12 * g.diameter());
    }
}

TEST_CASE("barycentric solves the affine system") {
    const Point2 p1{0, 0}, p2{1, 0}, p3{0, 1};
    SUBCASE("corner") {
        const Bary3 b = barycentric(p1, p2, p3, p1);
        CHECK(b.b1 == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(b.b2 == doctest::Approx(0.0));
        CHECK(b.b3 == doctest::Approx(0.0));
    }
    SUBCASE("centroid") {
        const Bary3 b = barycentric(p1, p2, p3, {1.0 / 3.0, 1.0 / 3.0});
        CHECK(b.b1 == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
        CHECK(b.b2 == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    }
    SUBCASE("unit triangle point") {
        const Bary3 b = barycentric(p1, p2, p3, {0.25, 0.25});
        CHECK(b.b1 == doctest::Approx(0.5).epsilon(1e-14));
        CHECK(b.b2 == doctest::Approx(0.25).epsilon(1e-14));
        CHECK(b.b3 == doctest::Approx(0.25).epsilon(1e-14));
    }
    SUBCASE("collinear points rejected") {
        CHECK_THROWS_AS(barycentric(p1, p2, {2, 0}, {0.5, 0.5}), std::invalid_argument);
    }
}

TEST_CASE("barycentric of combine is the identity") {
    Rng rng(11);
    const Point2 p1{0.2, -0.1}, p2{1.9, 0.3}, p3{0.4, 1.6};
    for (int i = 0; i < 500; ++i) {
        const Bary3 b{rng.uniform(-1, 2), rng.uniform(-1, 2), rng.uniform(-1, 2)};
        const Point2 x = combine(p1, p2, p3, b);
        const Bary3 r = barycentric(p1, p2, p3, x);
        CHECK(std::abs(r.b1 - b.b1) <= 1e-12);
        CHECK(std::abs(r.b2 - b.b2) <= 1e-12);
        CHECK(std::abs(r.b3 - b.b3) <= 1e-12);
    }
}

TEST_CASE("hull_area") {
    const std::vector<Point2> tri{{0, 0}, {1, 0}, {0, 1}};
    CHECK(hull_area(tri) == doctest::Approx(0.5).epsilon(1e-14));
    const std::vector<Point2> collinear{{0, 0}, {0, 0}, {1, 0}};
    CHECK(hull_area(collinear) == 0.0);
    const std::vector<Point2> square{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    CHECK(hull_area(square) == doctest::Approx(1.0).epsilon(1e-14));
    // Interior points do not change the hull.
    const std::vector<Point2> with_inner{{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0.5, 0.5}};
    CHECK(hull_area(with_inner) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("half-open triangles tile the plane") {
    // Two triangles split the unit square; translated copies tile the
    // plane.  Every sampled boundary point must be claimed exactly once.
    const HalfOpenConvention conv = HalfOpenConvention::lexicographic();
    Rng rng(3);

    auto covered_count = [&](Point2 x) {
        int count = 0;
        for (int dx = -1; dx <= 1; ++dx)
            for (int dy = -1; dy <= 1; ++dy) {
                const Point2 o{static_cast<double>(dx), static_cast<double>(dy)};
                const Point2 a = o, b = o + Point2{1, 0}, c = o + Point2{1, 1},
                             d = o + Point2{0, 1};
                if (half_open_contains(a, b, c, x, conv)) ++count;
                if (half_open_contains(a, c, d, x, conv)) ++count;
            }
        return count;
    };

    SUBCASE("interior and exterior") {
        CHECK(covered_count({0.7, 0.2}) == 1);   // inside lower triangle of (0,0)
        CHECK(!half_open_contains({0, 0}, {1, 0}, {1, 1}, {5.0, 5.0}, conv));
    }
    SUBCASE("boundary samples covered exactly once") {
        for (int i = 0; i < 1000; ++i) {
            Point2 x{0, 0};
            const double t = rng.uniform();
            switch (i % 5) {
                case 0: x = {t, 0.0}; break;            // square edge
                case 1: x = {0.0, t}; break;            // square edge
                case 2: x = {t, t}; break;              // diagonal
                case 3: x = {t, 1.0}; break;            // top edge
                default: {                              // corners
                    const int cx = i % 2, cy = (i / 2) % 2;
                    x = {static_cast<double>(cx), static_cast<double>(cy)};
                }
            }
            CAPTURE(x.x);
            CAPTURE(x.y);
            CHECK(covered_count(x) == 1);
        }
    }
}

TEST_CASE("the 12 subtriangles tile the macro triangle") {
    const PS12Frame f = unit_frame();
    const HalfOpenConvention conv = HalfOpenConvention::lexicographic();
    Rng rng(17);

    std::array<int, 13> hits{};
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        const Point2 x = rng.in_triangle(f.v(1), f.v(2), f.v(3));
        int claimed = 0;
        int id = 0;
        for (int t = 1; t <= 12; ++t) {
            const auto& idx = PS12Frame::subtriangle_vertices(t);
            if (half_open_contains(f.v(idx[0]), f.v(idx[1]), f.v(idx[2]), x, conv)) {
                ++claimed;
                id = t;
            }
        }
        REQUIRE(claimed == 1);
        ++hits[id];
    }
    // Equal-area tiles: each frequency within 3 standard errors of 1/12.
    const double p = 1.0 / 12.0;
    const double se = std::sqrt(p * (1 - p) / n);
    for (int t = 1; t <= 12; ++t) {
        const double freq = static_cast<double>(hits[t]) / n;
        CHECK(std::abs(freq - p) <= 3.0 * se);
    }
}

TEST_CASE("locate reports subtriangle and knot lines") {
    const PS12Frame f = unit_frame();
    const HalfOpenConvention conv = HalfOpenConvention::lexicographic();

    SUBCASE("centroid lies on all three medians") {
        const LocateResult r = locate(f, f.v(10), conv);
        CHECK(r.inside_closed);
        int medians = 0;
        for (const FrameLine& l : r.on_lines)
            if (l.kind == FrameLine::Kind::median) ++medians;
        CHECK(medians == 3);
    }
    SUBCASE("interior point of subtriangle 1") {
        // Strictly inside (v1, v4, v7).
        const Point2 x = combine(f.v(1), f.v(4), f.v(7), Bary3(0.4, 0.35, 0.25));
        const LocateResult r = locate(f, x, conv);
        CHECK(r.subtriangle == 1);
        CHECK(r.on_lines.empty());
    }
    SUBCASE("point on the median segment (v4, v10)") {
        const Point2 x = 0.5 * (f.v(4) + f.v(10));
        const LocateResult r = locate(f, x, conv);
        CHECK(r.inside_closed);
        CHECK(r.subtriangle != 0);
        bool found = false;
        for (const FrameLine& l : r.on_lines)
            if (l.kind == FrameLine::Kind::median && l.a == 3 && l.b == 4) found = true;
        CHECK(found);
    }
    SUBCASE("outside") {
        const LocateResult r = locate(f, {2.0, 2.0}, conv);
        CHECK(!r.inside_closed);
        CHECK(r.subtriangle == 0);
    }
    SUBCASE("interior-limit mode claims every closed-triangle point") {
        const HalfOpenConvention il = HalfOpenConvention::interior_limit(f.v(10));
        for (int i = 1; i <= 10; ++i) {
            const LocateResult r = locate(f, f.v(i), il);
            CHECK(r.inside_closed);
            CHECK(r.subtriangle != 0);
        }
    }
}
