#include "ps12/s_basis.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

#include "ps12/rng.hpp"

namespace ps12 {

MultiplicityVector::MultiplicityVector(const std::array<int, 10>& m) : m_(m) {
    for (int v : m_)
        if (v < 0) throw std::invalid_argument("MultiplicityVector: negative entry");
}

MultiplicityVector MultiplicityVector::parse(std::string_view digits) {
    if (digits.size() != 6 && digits.size() != 10)
        throw std::invalid_argument("MultiplicityVector: expected 6 or 10 digits");
    std::array<int, 10> m{};
    for (size_t i = 0; i < digits.size(); ++i) {
        if (digits[i] < '0' || digits[i] > '9')
            throw std::invalid_argument("MultiplicityVector: non-digit character");
        m[i] = digits[i] - '0';
    }
    return MultiplicityVector(m);
}

int MultiplicityVector::total() const {
    int t = 0;
    for (int v : m_) t += v;
    return t;
}

std::string MultiplicityVector::digits() const {
    std::string s(10, '0');
    for (int i = 0; i < 10; ++i) s[i] = static_cast<char>('0' + m_[i]);
    return s;
}

KnotMultiset MultiplicityVector::knots(const PS12Frame& frame) const {
    std::vector<Point2> k;
    k.reserve(total());
    for (int i = 1; i <= 10; ++i)
        for (int r = 0; r < m_[i - 1]; ++r) k.push_back(frame.v(i));
    return KnotMultiset(std::move(k));
}

MultiplicityVector MultiplicityVector::permuted(const std::array<int, 10>& perm) const {
    std::array<int, 10> out{};
    for (int i = 0; i < 10; ++i) out[perm[i] - 1] = m_[i];
    return MultiplicityVector(out);
}

std::span<const CornerPermutation> s3_elements() {
    static const std::array<CornerPermutation, 6> elems{{
        {1, 2, 3},  // id
        {2, 3, 1},  // rotation 1->2->3
        {3, 1, 2},  // rotation 1->3->2
        {2, 1, 3},  // swap 1,2
        {1, 3, 2},  // swap 2,3
        {3, 2, 1},  // swap 1,3
    }};
    return elems;
}

namespace {

int edge_midpoint(int a, int b) {
    const int s = a + b;
    if (s == 3) return 4;  // {1,2}
    if (s == 5) return 5;  // {2,3}
    if (s == 4) return 6;  // {1,3}
    throw std::invalid_argument("edge_midpoint: corners must be distinct in 1..3");
}

}  // namespace

std::array<int, 10> s3_induced_permutation(const CornerPermutation& g) {
    std::array<bool, 4> seen{};
    for (int v : g) {
        if (v < 1 || v > 3 || seen[v])
            throw std::invalid_argument("s3_induced_permutation: not a permutation of 1..3");
        seen[v] = true;
    }
    std::array<int, 10> p{};
    for (int i = 0; i < 3; ++i) p[i] = g[i];
    p[3] = edge_midpoint(g[0], g[1]);  // image of v4 = mid(1,2)
    p[4] = edge_midpoint(g[1], g[2]);  // image of v5 = mid(2,3)
    p[5] = edge_midpoint(g[0], g[2]);  // image of v6 = mid(1,3)
    // v7, v8, v9 sit on the medians from corners 1, 2, 3.
    p[6] = 6 + g[0];
    p[7] = 6 + g[1];
    p[8] = 6 + g[2];
    p[9] = 10;
    return p;
}

std::vector<SymmetricItem> orbit(const SymmetricItem& item) {
    std::vector<SymmetricItem> out;
    for (const CornerPermutation& g : s3_elements()) {
        const auto perm = s3_induced_permutation(g);
        SymmetricItem image;
        image.scale = item.scale;
        image.mult = item.mult.permuted(perm);
        image.coeff_factors.reserve(item.coeff_factors.size());
        for (int f : item.coeff_factors) image.coeff_factors.push_back(perm[f - 1]);
        std::sort(image.coeff_factors.begin(), image.coeff_factors.end());
        if (std::find(out.begin(), out.end(), image) == out.end())
            out.push_back(std::move(image));
    }
    return out;
}

const std::array<SBasisFunction, 12>& s_basis_functions() {
    static const std::array<SBasisFunction, 12> table = [] {
        const MultiplicityVector corner_gen = MultiplicityVector::parse("300101");
        const MultiplicityVector edge_gen = MultiplicityVector::parse("210101");
        const MultiplicityVector interior_gen = MultiplicityVector::parse("110111");

        std::array<SBasisFunction, 12> fns;
        int idx = 0;
        // Corners 1, 2, 3: the identity and the two rotations send corner 1
        // to 1, 2, 3 in turn.
        for (int g : {0, 1, 2}) {
            const auto perm = s3_induced_permutation(s3_elements()[g]);
            SBasisFunction f;
            f.cls = BasisClass::corner;
            f.corner = perm[0];
            f.scale = 0.25;
            f.mult = corner_gen.permuted(perm);
            fns[idx++] = f;
        }
        // Edges: the full orbit of (1,4) in group-enumeration order.
        for (const CornerPermutation& g : s3_elements()) {
            const auto perm = s3_induced_permutation(g);
            SBasisFunction f;
            f.cls = BasisClass::edge;
            f.corner = perm[0];
            f.midpoint = perm[3];
            f.scale = 0.5;
            f.mult = edge_gen.permuted(perm);
            fns[idx++] = f;
        }
        // Interiors: orbit of midpoint 4 (the rotations give 4, 5, 6).
        for (int g : {0, 1, 2}) {
            const auto perm = s3_induced_permutation(s3_elements()[g]);
            SBasisFunction f;
            f.cls = BasisClass::interior;
            f.midpoint = perm[3];
            f.scale = 0.75;
            f.mult = interior_gen.permuted(perm);
            fns[idx++] = f;
        }
        return fns;
    }();
    return table;
}

std::pair<Point2, Point2> SBasisFunction::blossom_pair(const PS12Frame& frame) const {
    switch (cls) {
        case BasisClass::corner:
            return {frame.v(corner), frame.v(corner)};
        case BasisClass::edge:
            return {frame.v(corner), frame.v(midpoint)};
        case BasisClass::interior:
            return {frame.v(midpoint), frame.v(10)};
    }
    throw std::logic_error("blossom_pair: bad class");
}

std::string SBasisFunction::label() const {
    switch (cls) {
        case BasisClass::corner:
            return "corner" + std::to_string(corner);
        case BasisClass::edge:
            return "edge" + std::to_string(corner) + std::to_string(midpoint);
        case BasisClass::interior:
            return "interior" + std::to_string(midpoint);
    }
    throw std::logic_error("label: bad class");
}

int basis_index(std::string_view label) {
    const auto& fns = s_basis_functions();
    for (int i = 0; i < 12; ++i)
        if (fns[i].label() == label) return i;
    return -1;
}

SBasis::SBasis(const PS12Frame& frame)
    : frame_(frame), ctx_(EvalContext::for_frame(frame, HalfOpenMode::interior_limit)) {
    knots_.reserve(12);
    for (const SBasisFunction& f : s_basis_functions())
        knots_.push_back(f.mult.knots(frame_));
}

std::array<double, 12> SBasis::eval(Point2 x) const {
    std::array<double, 12> out{};
    const Bary3 b = frame_.macro_barycentric(x);
    if (b.min() < -1e-12) return out;  // outside the closed macro triangle
    for (int j = 0; j < 12; ++j)
        out[j] = s_basis_functions()[j].scale * eval_q(knots_[j], x, ctx_);
    return out;
}

double SBasis::eval_one(int j, Point2 x) const {
    const Bary3 b = frame_.macro_barycentric(x);
    if (b.min() < -1e-12) return 0.0;
    return s_basis_functions()[j].scale * eval_q(knots_[j], x, ctx_);
}

double SBasis::derivative_one(int j, Point2 x, Point2 u) const {
    return s_basis_functions()[j].scale *
           directional_derivative(knots_[j], x, u, ctx_);
}

double univariate_bspline(const std::array<double, 4>& knots, double t) {
    const auto& k = knots;
    if (!(k[0] <= k[1] && k[1] <= k[2] && k[2] <= k[3]) || !(k[3] > k[0]))
        throw std::invalid_argument("univariate_bspline: bad knot vector");
    if (t < k[0] || t > k[3]) return 0.0;

    // Base intervals are half-open except that the last nonempty one is
    // closed, so the value at the right end of the support is the limit
    // from inside.
    int last_nonempty = -1;
    for (int i = 0; i < 3; ++i)
        if (k[i + 1] > k[i]) last_nonempty = i;
    std::array<double, 3> n0{};
    for (int i = 0; i < 3; ++i) {
        const bool in = (t >= k[i] && t < k[i + 1]) ||
                        (i == last_nonempty && t == k[i + 1]);
        n0[i] = in ? 1.0 : 0.0;
    }

    auto ratio = [](double num, double den) { return den > 0.0 ? num / den : 0.0; };
    std::array<double, 2> n1{};
    for (int i = 0; i < 2; ++i)
        n1[i] = ratio(t - k[i], k[i + 1] - k[i]) * n0[i] +
                ratio(k[i + 2] - t, k[i + 2] - k[i + 1]) * n0[i + 1];
    return ratio(t - k[0], k[2] - k[0]) * n1[0] +
           ratio(k[3] - t, k[3] - k[1]) * n1[1];
}

std::array<double, 4> BoundaryRestriction::eval(double t) const {
    std::array<double, 4> out{};
    for (int i = 0; i < 4; ++i) out[i] = univariate_bspline(knots[i], t);
    return out;
}

BoundaryRestriction boundary_restriction(const PS12Frame&, int corner_a,
                                         int corner_b) {
    if (corner_a < 1 || corner_a > 3 || corner_b < 1 || corner_b > 3 ||
        corner_a == corner_b)
        throw std::invalid_argument("boundary_restriction: not a macro edge");
    const int mid = edge_midpoint(corner_a, corner_b);

    auto find = [&](BasisClass cls, int corner, int midpoint) {
        const auto& fns = s_basis_functions();
        for (int i = 0; i < 12; ++i)
            if (fns[i].cls == cls && fns[i].corner == corner &&
                fns[i].midpoint == midpoint)
                return i;
        throw std::logic_error("boundary_restriction: basis function not found");
    };

    BoundaryRestriction r;
    r.basis_index = {find(BasisClass::corner, corner_a, 0),
                     find(BasisClass::edge, corner_a, mid),
                     find(BasisClass::edge, corner_b, mid),
                     find(BasisClass::corner, corner_b, 0)};
    r.knots = {{{0.0, 0.0, 0.0, 0.5},
                {0.0, 0.0, 0.5, 1.0},
                {0.0, 0.5, 1.0, 1.0},
                {0.5, 1.0, 1.0, 1.0}}};
    return r;
}

std::array<double, 10> extend_coefficients(const std::array<double, 3>& c) {
    std::array<double, 10> e{};
    e[0] = c[0];
    e[1] = c[1];
    e[2] = c[2];
    e[3] = 0.5 * (c[0] + c[1]);
    e[4] = 0.5 * (c[1] + c[2]);
    e[5] = 0.5 * (c[0] + c[2]);
    e[6] = 0.5 * (e[3] + e[5]);
    e[7] = 0.5 * (e[3] + e[4]);
    e[8] = 0.5 * (e[4] + e[5]);
    e[9] = (c[0] + c[1] + c[2]) / 3.0;
    return e;
}

double marsden_lhs(const PS12Frame& frame, const std::array<double, 3>& c,
                   Point2 x) {
    const EvalContext ctx =
        EvalContext::for_frame(frame, HalfOpenMode::interior_limit);
    double total = 0.0;
    for (int j = 0; j < 3; ++j) {
        if (c[j] == 0.0) continue;
        std::array<int, 10> m{1, 1, 1, 0, 0, 0, 0, 0, 0, 0};
        m[j] = 2;
        total += c[j] * eval_q(MultiplicityVector(m).knots(frame), x, ctx);
    }
    return total;
}

double marsden_coefficient(const std::array<double, 3>& c,
                           const SBasisFunction& b) {
    const auto e = extend_coefficients(c);
    switch (b.cls) {
        case BasisClass::corner:
            return e[b.corner - 1] * e[b.corner - 1];
        case BasisClass::edge:
            return e[b.corner - 1] * e[b.midpoint - 1];
        case BasisClass::interior:
            return e[b.midpoint - 1] * e[9];
    }
    throw std::logic_error("marsden_coefficient: bad class");
}

double verify_marsden(const SBasis& basis, const std::array<double, 3>& c,
                      std::span<const Point2> samples) {
    std::array<double, 12> coeff;
    for (int j = 0; j < 12; ++j)
        coeff[j] = marsden_coefficient(c, s_basis_functions()[j]);

    double max_err = 0.0;
    for (const Point2& x : samples) {
        const double lhs = marsden_lhs(basis.frame(), c, x);
        const auto b = basis.eval(x);
        double rhs = 0.0;
        for (int j = 0; j < 12; ++j) rhs += coeff[j] * b[j];
        max_err = std::max(max_err, std::abs(lhs * lhs - rhs));
    }
    return max_err;
}

std::array<DualFunctional, 12> dual_functionals(const PS12Frame& frame) {
    std::array<DualFunctional, 12> out;
    for (int j = 0; j < 12; ++j) {
        const auto [a, b] = s_basis_functions()[j].blossom_pair(frame);
        out[j] = DualFunctional{a, b};
    }
    return out;
}

double SplineFunction::eval(Point2 x) const {
    const auto b = basis.eval(x);
    double total = 0.0;
    for (int j = 0; j < 12; ++j) total += coefficients[j] * b[j];
    return total;
}

SplineFunction quasi_interpolant(const PS12Frame& frame,
                                 const std::function<double(Point2)>& f) {
    SplineFunction s{SBasis(frame), {}};
    const auto duals = dual_functionals(frame);
    for (int j = 0; j < 12; ++j) s.coefficients[j] = duals[j](f);
    return s;
}

std::array<SubtriangleIndependence, 12> local_independence_report(
    const SBasis& basis, int samples_per_triangle) {
    std::array<SubtriangleIndependence, 12> report;
    const PS12Frame& frame = basis.frame();
    Rng rng(0x5eed5eedULL);

    for (int id = 1; id <= 12; ++id) {
        SubtriangleIndependence& entry = report[id - 1];
        entry.subtriangle = id;

        const auto& idx = PS12Frame::subtriangle_vertices(id);
        const std::array<Point2, 3> tri{frame.v(idx[0]), frame.v(idx[1]),
                                        frame.v(idx[2])};

        // Active = support (the hull of the knots) contains the subtriangle.
        for (int j = 0; j < 12; ++j) {
            const KnotMultiset& k = basis.knot_multiset(j);
            bool inside = true;
            for (const Point2& corner : tri)
                if (!k.contains_in_hull(corner)) {
                    inside = false;
                    break;
                }
            if (inside) entry.active.push_back(j);
        }

        const int rows = std::max(samples_per_triangle, 10);
        Eigen::MatrixXd m(rows, static_cast<int>(entry.active.size()));
        for (int r = 0; r < rows; ++r) {
            // Strictly interior sample, away from the subtriangle boundary.
            Bary3 b = rng.bary();
            while (b.min() < 0.05) b = rng.bary();
            const Point2 x = combine(tri[0], tri[1], tri[2], b);
            const auto vals = basis.eval(x);
            for (size_t c = 0; c < entry.active.size(); ++c)
                m(r, static_cast<int>(c)) = vals[entry.active[c]];
        }

        Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
        const auto& sv = svd.singularValues();
        const double cutoff = 1e-10 * sv(0);
        int rank = 0;
        while (rank < sv.size() && sv(rank) > cutoff) ++rank;
        entry.rank = rank;
        entry.gap = rank < sv.size() && sv(rank) > 0.0
                        ? sv(rank - 1) / sv(rank)
                        : std::numeric_limits<double>::infinity();
    }
    return report;
}

}  // namespace ps12
