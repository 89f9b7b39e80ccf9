#pragma once

// Conforming P1 triangulations of the registry shapes (unit square, disk,
// annulus, punctured variants), edge-midpoint quadrature, nodal fields with
// per-triangle gradients, uniform refinement by edge bisection, and the
// plain-text mesh exchange format.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "dplab/core.hpp"

namespace dplab {

enum class ShapeKind { unit_square, unit_disk, annulus, custom };

struct Shape {
    ShapeKind kind = ShapeKind::unit_square;
    double r = 0.0;  // annulus inner radius
    double R = 1.0;  // disk/annulus outer radius

    static Shape unit_square() { return {ShapeKind::unit_square, 0.0, 1.0}; }
    static Shape unit_disk() { return {ShapeKind::unit_disk, 0.0, 1.0}; }
    static Shape annulus(double r, double R) {
        if (!(0.0 < r && r < R)) throw parameter_error("annulus: requires 0 < r < R");
        return {ShapeKind::annulus, r, R};
    }

    double analytic_area() const {
        switch (kind) {
            case ShapeKind::unit_square: return 1.0;
            case ShapeKind::unit_disk: return M_PI * R * R;
            case ShapeKind::annulus: return M_PI * (R * R - r * r);
            case ShapeKind::custom: return -1.0;
        }
        return -1.0;
    }

    // Signed clearance to the boundary; positive inside.
    double boundary_clearance(Vec2 p) const {
        switch (kind) {
            case ShapeKind::unit_square:
                return std::min(std::min(p.x, 1.0 - p.x), std::min(p.y, 1.0 - p.y));
            case ShapeKind::unit_disk:
                return R - p.norm();
            case ShapeKind::annulus:
                return std::min(p.norm() - r, R - p.norm());
            case ShapeKind::custom:
                return 0.0;
        }
        return 0.0;
    }

    bool contains(Vec2 p) const { return boundary_clearance(p) > 0.0; }
    bool contains_ball(Ball b) const {
        return boundary_clearance(b.center) >= b.radius;
    }
};

// Compact-set descriptor: finite point sets and polygonal segments.
// Text mini-format, one primitive per line:
//   point x y
//   segment x1 y1 x2 y2
// optionally wrapped in "union" ... "end".
struct SetDescriptor {
    struct Segment {
        Vec2 a, b;
    };
    std::vector<Vec2> points;
    std::vector<Segment> segments;

    bool empty() const { return points.empty() && segments.empty(); }

    static double segment_distance(Vec2 p, const Segment& s) {
        const Vec2 d = s.b - s.a;
        const double len2 = d.norm2();
        if (len2 == 0.0) return dist(p, s.a);
        const double t = std::clamp((p - s.a).dot(d) / len2, 0.0, 1.0);
        return dist(p, s.a + t * d);
    }

    double distance(Vec2 p) const {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& q : points) best = std::min(best, dist(p, q));
        for (const auto& s : segments) best = std::min(best, segment_distance(p, s));
        return best;
    }

    // Sample points along every primitive at the given pitch; used by the
    // covering search and by clearance checks.
    std::vector<Vec2> sample(double pitch) const {
        std::vector<Vec2> out = points;
        for (const auto& s : segments) {
            const double len = dist(s.a, s.b);
            const int n = std::max(1, static_cast<int>(std::ceil(len / pitch)));
            for (int i = 0; i <= n; ++i) out.push_back(s.a + (s.b - s.a) * (double(i) / n));
        }
        return out;
    }

    static SetDescriptor parse(const std::string& text) {
        SetDescriptor d;
        std::istringstream in(text);
        std::string tok;
        while (in >> tok) {
            if (tok == "union" || tok == "end" || tok == ";") continue;
            if (tok == "point") {
                Vec2 p;
                if (!(in >> p.x >> p.y)) throw config_error("set descriptor: bad point");
                d.points.push_back(p);
            } else if (tok == "segment") {
                Segment s;
                if (!(in >> s.a.x >> s.a.y >> s.b.x >> s.b.y))
                    throw config_error("set descriptor: bad segment");
                d.segments.push_back(s);
            } else {
                throw config_error("set descriptor: unknown primitive '" + tok + "'");
            }
        }
        return d;
    }

    std::string serialize() const {
        std::ostringstream out;
        const bool multi = points.size() + segments.size() > 1;
        if (multi) out << "union\n";
        char buf[160];
        for (const auto& p : points) {
            std::snprintf(buf, sizeof buf, "point %.17g %.17g\n", p.x, p.y);
            out << buf;
        }
        for (const auto& s : segments) {
            std::snprintf(buf, sizeof buf, "segment %.17g %.17g %.17g %.17g\n", s.a.x, s.a.y,
                          s.b.x, s.b.y);
            out << buf;
        }
        if (multi) out << "end\n";
        return out.str();
    }
};

struct Triangle {
    int a = 0, b = 0, c = 0;
    int operator[](int i) const { return i == 0 ? a : (i == 1 ? b : c); }
};

class DiscreteDomain {
  public:
    // every triangle carries the degree-2 edge-midpoint rule
    static constexpr const char* kQuadratureRule = "edge-midpoint-3";

    Shape shape;
    std::optional<SetDescriptor> excluded_set;
    std::vector<Vec2> nodes;
    std::vector<Triangle> triangles;
    std::vector<bool> is_boundary;
    std::vector<bool> is_excluded;
    double h = 0.0;  // max edge length

    // derived per-triangle data
    std::vector<double> tri_area;
    std::vector<Vec2> tri_barycenter;
    std::vector<std::array<Vec2, 3>> tri_hat_grad;

    int n_nodes() const { return static_cast<int>(nodes.size()); }
    int n_triangles() const { return static_cast<int>(triangles.size()); }

    std::vector<int> boundary_nodes() const {
        std::vector<int> out;
        for (int i = 0; i < n_nodes(); ++i)
            if (is_boundary[i]) out.push_back(i);
        return out;
    }
    std::vector<int> excluded_nodes() const {
        std::vector<int> out;
        for (int i = 0; i < n_nodes(); ++i)
            if (is_excluded[i]) out.push_back(i);
        return out;
    }

    double total_area() const {
        double s = 0.0;
        for (double a : tri_area) s += a;
        return s;
    }

    double min_angle_deg() const {
        double worst = 180.0;
        for (const auto& t : triangles) {
            const Vec2 P[3] = {nodes[t.a], nodes[t.b], nodes[t.c]};
            for (int k = 0; k < 3; ++k) {
                const Vec2 u = P[(k + 1) % 3] - P[k], v = P[(k + 2) % 3] - P[k];
                const double ang =
                    std::acos(std::clamp(u.dot(v) / (u.norm() * v.norm()), -1.0, 1.0));
                worst = std::min(worst, ang * 180.0 / M_PI);
            }
        }
        return worst;
    }

    // Rebuild areas, barycenters, hat gradients, h. Orientation is enforced
    // by swapping vertices when the signed area is negative.
    void finalize() {
        const int m = n_triangles();
        tri_area.assign(m, 0.0);
        tri_barycenter.assign(m, Vec2{});
        tri_hat_grad.assign(m, {});
        h = 0.0;
        for (int t = 0; t < m; ++t) {
            Triangle& tr = triangles[t];
            Vec2 A = nodes[tr.a], B = nodes[tr.b], C = nodes[tr.c];
            double s2 = (B - A).x * (C - A).y - (B - A).y * (C - A).x;
            if (s2 < 0.0) {
                std::swap(tr.b, tr.c);
                std::swap(B, C);
                s2 = -s2;
            }
            if (s2 <= 0.0) throw data_error("mesh: degenerate triangle");
            tri_area[t] = 0.5 * s2;
            tri_barycenter[t] = (A + B + C) / 3.0;
            tri_hat_grad[t][0] = Vec2{B.y - C.y, C.x - B.x} / s2;
            tri_hat_grad[t][1] = Vec2{C.y - A.y, A.x - C.x} / s2;
            tri_hat_grad[t][2] = Vec2{A.y - B.y, B.x - A.x} / s2;
            h = std::max({h, dist(A, B), dist(B, C), dist(C, A)});
        }
    }

    // Structural invariants: conformity, Euler formula, minimum angle, and
    // (for registry shapes) agreement with the analytic area.
    void validate() const {
        std::map<std::pair<int, int>, int> edge_count;
        for (const auto& t : triangles) {
            const int idx[3] = {t.a, t.b, t.c};
            for (int k = 0; k < 3; ++k) {
                const int u = idx[k], v = idx[(k + 1) % 3];
                edge_count[{std::min(u, v), std::max(u, v)}]++;
            }
        }
        int boundary_edges = 0;
        for (const auto& [e, c] : edge_count) {
            if (c > 2) throw data_error("mesh: non-conforming edge");
            if (c == 1) {
                ++boundary_edges;
                if (!is_boundary[e.first] || !is_boundary[e.second])
                    throw data_error("mesh: boundary edge with interior endpoints");
            }
        }
        const int V = n_nodes();
        const int E = static_cast<int>(edge_count.size());
        const int T = n_triangles();
        const int holes = shape.kind == ShapeKind::annulus ? 1 : 0;
        if (V - E + T != 1 - holes) throw data_error("mesh: Euler characteristic mismatch");
        if (min_angle_deg() <= 15.0) throw data_error("mesh: minimum angle below 15 degrees");
        const double exact = shape.analytic_area();
        if (exact > 0.0 && std::abs(total_area() - exact) > 1e-3 * exact)
            throw data_error("mesh: area deviates from analytic value");
    }
};

namespace detail {

// Triangulate the strip between two concentric node rings (both with even
// node counts, both starting at the +pi/2 spoke) by walking half the strip
// and mirroring, so the triangulation is symmetric under x1 -> -x1.
inline void bridge_rings(const std::vector<int>& inner, const std::vector<int>& outer,
                         std::vector<Triangle>& tris) {
    const int Ni = static_cast<int>(inner.size());
    const int No = static_cast<int>(outer.size());
    if (Ni % 2 || No % 2) throw data_error("bridge_rings: ring counts must be even");
    const auto mi = [&](int j) { return inner[(Ni - j) % Ni]; };
    const auto mo = [&](int i) { return outer[(No - i) % No]; };
    int i = 0, j = 0;
    while (i < No / 2 || j < Ni / 2) {
        bool adv_outer;
        if (i == No / 2)
            adv_outer = false;
        else if (j == Ni / 2)
            adv_outer = true;
        else
            adv_outer = (i + 1) * static_cast<std::int64_t>(Ni) <=
                        (j + 1) * static_cast<std::int64_t>(No);
        if (adv_outer) {
            tris.push_back({outer[i], outer[i + 1], inner[j]});
            tris.push_back({mo(i), mo(i + 1), mi(j)});
            ++i;
        } else {
            tris.push_back({inner[j], outer[i], inner[j + 1]});
            tris.push_back({mi(j), mo(i), mi(j + 1)});
            ++j;
        }
    }
}

// Ring nodes start on the positive x2 spoke so the node set and the
// half-strip mirroring are both symmetric about the x2-axis.
inline std::vector<int> add_ring(std::vector<Vec2>& nodes, double radius, int count) {
    std::vector<int> ids(count);
    for (int k = 0; k < count; ++k) {
        const double th = M_PI / 2.0 + 2.0 * M_PI * k / count;
        ids[k] = static_cast<int>(nodes.size());
        nodes.push_back({radius * std::cos(th), radius * std::sin(th)});
    }
    return ids;
}

}  // namespace detail

struct DomainSpec {
    Shape shape;
    std::optional<SetDescriptor> excluded;  // descriptor of E for punctured shapes

    static DomainSpec unit_square() { return {Shape::unit_square(), std::nullopt}; }
    static DomainSpec unit_disk() { return {Shape::unit_disk(), std::nullopt}; }
    static DomainSpec annulus(double r, double R) { return {Shape::annulus(r, R), std::nullopt}; }
    static DomainSpec punctured(DomainSpec base, SetDescriptor e) {
        base.excluded = std::move(e);
        return base;
    }
};

namespace detail {

inline void mark_excluded(DiscreteDomain& dom) {
    dom.is_excluded.assign(dom.n_nodes(), false);
    if (!dom.excluded_set || dom.excluded_set->empty()) return;
    const auto& E = *dom.excluded_set;

    // E must be strictly inside the domain.
    for (const auto& p : E.sample(dom.h / 4.0))
        if (dom.shape.boundary_clearance(p) <= 0.0)
            throw config_error("punctured domain: excluded set touches the boundary");

    for (const auto& p : E.points) {
        int best = -1;
        double bestd = std::numeric_limits<double>::infinity();
        for (int i = 0; i < dom.n_nodes(); ++i) {
            if (dom.is_boundary[i]) continue;
            const double d = dist(dom.nodes[i], p);
            if (d < bestd) {
                bestd = d;
                best = i;
            }
        }
        if (best < 0 || bestd >= dom.h)
            throw config_error("punctured domain: no interior node near excluded point");
        dom.is_excluded[best] = true;
    }
    for (const auto& s : E.segments) {
        for (int i = 0; i < dom.n_nodes(); ++i) {
            if (dom.is_boundary[i]) continue;
            if (SetDescriptor::segment_distance(dom.nodes[i], s) <= dom.h / 2.0)
                dom.is_excluded[i] = true;
        }
    }
}

inline DiscreteDomain build_square(double target_h) {
    DiscreteDomain dom;
    dom.shape = Shape::unit_square();
    int m = std::max(2, static_cast<int>(std::ceil(std::sqrt(2.0) / target_h)));
    if (m % 2) ++m;  // even grid + alternating diagonals = mirror symmetry
    const auto id = [m](int i, int j) { return j * (m + 1) + i; };
    for (int j = 0; j <= m; ++j)
        for (int i = 0; i <= m; ++i)
            dom.nodes.push_back({double(i) / m, double(j) / m});
    for (int j = 0; j < m; ++j)
        for (int i = 0; i < m; ++i) {
            if ((i + j) % 2 == 0) {
                dom.triangles.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
                dom.triangles.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
            } else {
                dom.triangles.push_back({id(i, j), id(i + 1, j), id(i, j + 1)});
                dom.triangles.push_back({id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)});
            }
        }
    dom.is_boundary.assign(dom.n_nodes(), false);
    for (int j = 0; j <= m; ++j)
        for (int i = 0; i <= m; ++i)
            if (i == 0 || j == 0 || i == m || j == m) dom.is_boundary[id(i, j)] = true;
    dom.finalize();
    return dom;
}

inline DiscreteDomain build_disk_rings(int K) {
    DiscreteDomain dom;
    dom.shape = Shape::unit_disk();
    const double dr = 1.0 / K;
    dom.nodes.push_back({0.0, 0.0});
    std::vector<int> prev{0};
    for (int k = 1; k <= K; ++k) {
        auto ring = detail::add_ring(dom.nodes, k * dr, 6 * k);
        if (k == 1)
            for (int j = 0; j < 6; ++j)
                dom.triangles.push_back({0, ring[j], ring[(j + 1) % 6]});
        else
            detail::bridge_rings(prev, ring, dom.triangles);
        prev = std::move(ring);
    }
    dom.is_boundary.assign(dom.n_nodes(), false);
    for (int id : prev) dom.is_boundary[id] = true;
    dom.finalize();
    return dom;
}

inline DiscreteDomain build_disk(double target_h) {
    // ring counts divisible by 4 keep the quarter-radius circles node-aligned
    const auto round4 = [](int k) { return ((k + 3) / 4) * 4; };
    int K = round4(std::max(16, static_cast<int>(std::ceil(1.45 / target_h))));
    DiscreteDomain dom = build_disk_rings(K);
    while (dom.h > target_h) {
        K = round4(std::max(K + 1, static_cast<int>(std::ceil(K * dom.h / target_h))));
        dom = build_disk_rings(K);
    }
    return dom;
}

inline DiscreteDomain build_annulus_rings(double r, double R, int K) {
    DiscreteDomain dom;
    dom.shape = Shape::annulus(r, R);
    const double dr = (R - r) / K;
    int N0 = std::max(32, static_cast<int>(std::llround(6.0 * r / dr)));
    if (N0 % 2) ++N0;
    std::vector<int> first, last;
    std::vector<int> prev;
    for (int k = 0; k <= K; ++k) {
        auto ring = detail::add_ring(dom.nodes, r + k * dr, N0 + 6 * k);
        if (k == 0)
            first = ring;
        else
            detail::bridge_rings(prev, ring, dom.triangles);
        if (k == K) last = ring;
        prev = std::move(ring);
    }
    dom.is_boundary.assign(dom.n_nodes(), false);
    for (int id : first) dom.is_boundary[id] = true;
    for (int id : last) dom.is_boundary[id] = true;
    dom.finalize();
    return dom;
}

inline DiscreteDomain build_annulus(double r, double R, double target_h) {
    int K = std::max(4, static_cast<int>(std::ceil(1.45 * (R - r) / target_h)));
    DiscreteDomain dom = build_annulus_rings(r, R, K);
    while (dom.h > target_h) {
        K = std::max(K + 1, static_cast<int>(std::ceil(K * dom.h / target_h)));
        dom = build_annulus_rings(r, R, K);
    }
    return dom;
}

}  // namespace detail

inline DiscreteDomain build_domain(const DomainSpec& spec, double target_h) {
    if (!(target_h > 0.0)) throw parameter_error("build_domain: target_h must be positive");
    DiscreteDomain dom;
    switch (spec.shape.kind) {
        case ShapeKind::unit_square: dom = detail::build_square(target_h); break;
        case ShapeKind::unit_disk: dom = detail::build_disk(target_h); break;
        case ShapeKind::annulus:
            dom = detail::build_annulus(spec.shape.r, spec.shape.R, target_h);
            break;
        case ShapeKind::custom: throw parameter_error("build_domain: unknown shape");
    }
    if (dom.h > target_h + 1e-12) throw data_error("build_domain: mesh size exceeds target");
    dom.excluded_set = spec.excluded;
    detail::mark_excluded(dom);
    dom.validate();
    return dom;
}

// Uniform refinement by edge bisection; midpoints of circular boundary edges
// are projected back onto their circle so the geometry converges.
inline DiscreteDomain refine(const DiscreteDomain& dom) {
    DiscreteDomain out;
    out.shape = dom.shape;
    out.excluded_set = dom.excluded_set;
    out.nodes = dom.nodes;
    out.is_boundary = dom.is_boundary;

    std::map<std::pair<int, int>, int> edge_usage;
    for (const auto& t : dom.triangles) {
        const int idx[3] = {t.a, t.b, t.c};
        for (int k = 0; k < 3; ++k) {
            const int u = idx[k], v = idx[(k + 1) % 3];
            edge_usage[{std::min(u, v), std::max(u, v)}]++;
        }
    }
    std::map<std::pair<int, int>, int> midpoint;
    for (const auto& [e, uses] : edge_usage) {
        Vec2 mid = (dom.nodes[e.first] + dom.nodes[e.second]) * 0.5;
        const bool on_boundary = uses == 1;
        if (on_boundary &&
            (dom.shape.kind == ShapeKind::unit_disk || dom.shape.kind == ShapeKind::annulus)) {
            const double rin = dom.shape.r, rout = dom.shape.R;
            const double target =
                (dom.shape.kind == ShapeKind::annulus &&
                 std::abs(mid.norm() - rin) < std::abs(mid.norm() - rout))
                    ? rin
                    : rout;
            if (mid.norm() > 0.0) mid = mid * (target / mid.norm());
        }
        midpoint[e] = static_cast<int>(out.nodes.size());
        out.nodes.push_back(mid);
        out.is_boundary.push_back(on_boundary);
    }
    auto mid_id = [&](int u, int v) { return midpoint.at({std::min(u, v), std::max(u, v)}); };
    for (const auto& t : dom.triangles) {
        const int ab = mid_id(t.a, t.b), bc = mid_id(t.b, t.c), ca = mid_id(t.c, t.a);
        out.triangles.push_back({t.a, ab, ca});
        out.triangles.push_back({ab, t.b, bc});
        out.triangles.push_back({ca, bc, t.c});
        out.triangles.push_back({ab, bc, ca});
    }
    out.finalize();
    detail::mark_excluded(out);
    out.validate();
    return out;
}

// ---------------------------------------------------------------------------
// Nodal fields

class NodalField {
  public:
    NodalField() = default;
    NodalField(const DiscreteDomain& dom, double fill = 0.0)
        : values(dom.n_nodes(), fill), dom_(&dom) {}
    NodalField(const DiscreteDomain& dom, std::vector<double> vals)
        : values(std::move(vals)), dom_(&dom) {
        if (static_cast<int>(values.size()) != dom.n_nodes())
            throw data_error("nodal field: value count mismatch");
    }

    static NodalField interpolate(const DiscreteDomain& dom,
                                  const std::function<double(Vec2)>& f) {
        NodalField w(dom);
        for (int i = 0; i < dom.n_nodes(); ++i) {
            w.values[i] = f(dom.nodes[i]);
            if (!std::isfinite(w.values[i]))
                throw data_error("nodal field: non-finite value at node");
        }
        return w;
    }

    const DiscreteDomain& domain() const { return *dom_; }

    Vec2 gradient(int tri) const {
        const auto& t = dom_->triangles[tri];
        const auto& g = dom_->tri_hat_grad[tri];
        return values[t.a] * g[0] + values[t.b] * g[1] + values[t.c] * g[2];
    }

    double value_at(int tri, Vec2 x) const {
        const auto& t = dom_->triangles[tri];
        const Vec2 grad = gradient(tri);
        return values[t.a] + grad.dot(x - dom_->nodes[t.a]);
    }

    double min_value() const { return *std::min_element(values.begin(), values.end()); }
    double max_value() const { return *std::max_element(values.begin(), values.end()); }

    std::vector<double> values;

  private:
    const DiscreteDomain* dom_ = nullptr;
};

// ---------------------------------------------------------------------------
// Quadrature

struct RegionSpec {
    enum class Kind { all, ball, complement };
    Kind kind = Kind::all;
    Ball b;

    static RegionSpec all() { return {Kind::all, {}}; }
    static RegionSpec ball(Ball b) { return {Kind::ball, b}; }
    static RegionSpec complement(Ball b) { return {Kind::complement, b}; }

    bool admits(Vec2 barycenter) const {
        switch (kind) {
            case Kind::all: return true;
            case Kind::ball: return b.contains(barycenter);
            case Kind::complement: return !b.contains(barycenter);
        }
        return true;
    }
};

struct IntegralResult {
    double value = 0.0;
    bool empty = false;  // region met no triangle barycenter
};

// Three-point edge-midpoint rule (exact for quadratics). Triangles belong to
// the region iff their barycenter does.
template <typename F>
IntegralResult integrate(const NodalField& w, F&& f, RegionSpec region = RegionSpec::all()) {
    const auto& dom = w.domain();
    double acc = 0.0;
    bool any = false;
    for (int t = 0; t < dom.n_triangles(); ++t) {
        if (!region.admits(dom.tri_barycenter[t])) continue;
        any = true;
        const auto& tr = dom.triangles[t];
        const Vec2 A = dom.nodes[tr.a], B = dom.nodes[tr.b], C = dom.nodes[tr.c];
        const double va = w.values[tr.a], vb = w.values[tr.b], vc = w.values[tr.c];
        const Vec2 grad = w.gradient(t);
        const double wq = dom.tri_area[t] / 3.0;
        acc += wq * f((A + B) * 0.5, 0.5 * (va + vb), grad);
        acc += wq * f((B + C) * 0.5, 0.5 * (vb + vc), grad);
        acc += wq * f((C + A) * 0.5, 0.5 * (vc + va), grad);
    }
    return {acc, !any};
}

// Same rule for integrands that only depend on position.
template <typename F>
IntegralResult integrate_fn(const DiscreteDomain& dom, F&& f,
                            RegionSpec region = RegionSpec::all()) {
    double acc = 0.0;
    bool any = false;
    for (int t = 0; t < dom.n_triangles(); ++t) {
        if (!region.admits(dom.tri_barycenter[t])) continue;
        any = true;
        const auto& tr = dom.triangles[t];
        const Vec2 A = dom.nodes[tr.a], B = dom.nodes[tr.b], C = dom.nodes[tr.c];
        const double wq = dom.tri_area[t] / 3.0;
        acc += wq * (f((A + B) * 0.5) + f((B + C) * 0.5) + f((C + A) * 0.5));
    }
    return {acc, !any};
}

// Radial hat: 1 on the inner ball, 0 outside the outer ball, linear between.
inline NodalField cutoff(const DiscreteDomain& dom, double inner_rho, double outer_rho,
                         Vec2 center) {
    if (!(0.0 < inner_rho && inner_rho < outer_rho))
        throw parameter_error("cutoff: requires 0 < inner < outer");
    if (!dom.shape.contains_ball({center, outer_rho}) && dom.shape.kind != ShapeKind::custom)
        throw domain_error("cutoff: outer ball exits the domain");
    NodalField eta(dom);
    for (int i = 0; i < dom.n_nodes(); ++i) {
        const double r = dist(dom.nodes[i], center);
        eta.values[i] = std::clamp((outer_rho - r) / (outer_rho - inner_rho), 0.0, 1.0);
    }
    return eta;
}

// ---------------------------------------------------------------------------
// Mesh exchange format

inline std::string write_mesh(const DiscreteDomain& dom) {
    std::ostringstream out;
    char buf[200];
    out << "shape ";
    switch (dom.shape.kind) {
        case ShapeKind::unit_square: out << "unit_square"; break;
        case ShapeKind::unit_disk: out << "unit_disk"; break;
        case ShapeKind::annulus: {
            std::snprintf(buf, sizeof buf, "annulus %.17g %.17g", dom.shape.r, dom.shape.R);
            out << buf;
            break;
        }
        case ShapeKind::custom: out << "custom"; break;
    }
    out << "\n";
    out << "nodes " << dom.n_nodes() << "\n";
    for (int i = 0; i < dom.n_nodes(); ++i) {
        std::snprintf(buf, sizeof buf, "%d %.17g %.17g\n", i, dom.nodes[i].x, dom.nodes[i].y);
        out << buf;
    }
    out << "triangles " << dom.n_triangles() << "\n";
    for (int t = 0; t < dom.n_triangles(); ++t)
        out << t << " " << dom.triangles[t].a << " " << dom.triangles[t].b << " "
            << dom.triangles[t].c << "\n";
    const auto bn = dom.boundary_nodes();
    out << "boundary " << bn.size() << "\n";
    for (int i : bn) out << i << "\n";
    const auto en = dom.excluded_nodes();
    out << "excluded " << en.size() << "\n";
    for (int i : en) out << i << "\n";
    return out.str();
}

inline DiscreteDomain read_mesh(const std::string& text) {
    DiscreteDomain dom;
    std::istringstream in(text);
    std::string tok;
    dom.shape.kind = ShapeKind::custom;
    while (in >> tok) {
        if (tok == "shape") {
            std::string kind;
            in >> kind;
            if (kind == "unit_square") dom.shape = Shape::unit_square();
            else if (kind == "unit_disk") dom.shape = Shape::unit_disk();
            else if (kind == "annulus") {
                double r, R;
                if (!(in >> r >> R)) throw data_error("mesh read: bad annulus radii");
                dom.shape = Shape::annulus(r, R);
            } else if (kind == "custom") dom.shape.kind = ShapeKind::custom;
            else throw data_error("mesh read: unknown shape");
        } else if (tok == "nodes") {
            int n;
            in >> n;
            dom.nodes.resize(n);
            for (int k = 0; k < n; ++k) {
                int idx;
                Vec2 p;
                if (!(in >> idx >> p.x >> p.y)) throw data_error("mesh read: bad node line");
                dom.nodes.at(idx) = p;
            }
            dom.is_boundary.assign(n, false);
            dom.is_excluded.assign(n, false);
        } else if (tok == "triangles") {
            int m;
            in >> m;
            dom.triangles.resize(m);
            for (int k = 0; k < m; ++k) {
                int idx;
                Triangle t;
                if (!(in >> idx >> t.a >> t.b >> t.c))
                    throw data_error("mesh read: bad triangle line");
                dom.triangles.at(idx) = t;
            }
        } else if (tok == "boundary") {
            int n;
            in >> n;
            for (int k = 0; k < n; ++k) {
                int idx;
                if (!(in >> idx)) throw data_error("mesh read: bad boundary line");
                dom.is_boundary.at(idx) = true;
            }
        } else if (tok == "excluded") {
            int n;
            in >> n;
            for (int k = 0; k < n; ++k) {
                int idx;
                if (!(in >> idx)) throw data_error("mesh read: bad excluded line");
                dom.is_excluded.at(idx) = true;
            }
        } else {
            throw data_error("mesh read: unknown section '" + tok + "'");
        }
    }
    if (dom.nodes.empty() || dom.triangles.empty()) throw data_error("mesh read: empty mesh");
    dom.finalize();
    return dom;
}

}  // namespace dplab
