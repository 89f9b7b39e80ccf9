#pragma once

// Empirical verification of the quantitative inequalities satisfied by
// solutions of the obstacle problem: Sobolev-Poincare, Caccioppoli for
// positive supersolutions, Gehring reverse-Holder, De Giorgi boundedness,
// Harnack and weak Harnack, oscillation decay across the contact set, and
// the measure-density estimate with the H_sigma kernel. No theoretical
// constant is asserted against a fixed number; the testable surrogate is a finite worst
// ratio that stays within a factor-2 drift budget under mesh refinement.

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "dplab/caphaus.hpp"
#include "dplab/double_phase.hpp"
#include "dplab/mesh.hpp"
#include "dplab/solve.hpp"

namespace dplab {

struct SampleRow {
    Vec2 center;
    double rho = 0.0;
    double param = 0.0;  // check-specific exponent (delta, h, ...)
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;
    bool degenerate = false;  // lhs = rhs = 0; excluded from worst_ratio
};

struct InequalityReport {
    std::string name;
    std::vector<SampleRow> rows;
    double worst_ratio = 0.0;
    int degenerate_count = 0;
    std::map<std::string, double> extras;

    void push(SampleRow row) {
        if (row.degenerate) {
            ++degenerate_count;
        } else {
            worst_ratio = std::max(worst_ratio, row.ratio);
        }
        rows.push_back(row);
    }
    bool finite() const { return std::isfinite(worst_ratio); }
};

// Centers sampled uniformly over the admissible region (clearance at least
// containment_factor * rho), fixed seed for reproducibility.
inline std::vector<Vec2> sample_ball_centers(const Shape& shape, double rho,
                                             double containment_factor, int count,
                                             std::uint64_t seed = kBallSamplerSeed) {
    Rng rng(seed);
    std::vector<Vec2> centers;
    const double need = containment_factor * rho;
    int guard = 0;
    while (static_cast<int>(centers.size()) < count && guard < 100000) {
        ++guard;
        Vec2 p;
        switch (shape.kind) {
            case ShapeKind::unit_square: p = {rng.uniform(), rng.uniform()}; break;
            default: p = rng.in_ball({{0.0, 0.0}, shape.R}); break;
        }
        if (shape.boundary_clearance(p) > need + 1e-12) centers.push_back(p);
    }
    if (static_cast<int>(centers.size()) < count)
        throw parameter_error("sample_ball_centers: admissible region too small");
    return centers;
}

namespace detail {

// quadrature of f(x, triangle_index) over a region, 3-point rule
template <typename F>
inline IntegralResult quad_region(const DiscreteDomain& dom, RegionSpec region, F&& f) {
    double acc = 0.0;
    bool any = false;
    for (int t = 0; t < dom.n_triangles(); ++t) {
        if (!region.admits(dom.tri_barycenter[t])) continue;
        any = true;
        const auto& tr = dom.triangles[t];
        const Vec2 A = dom.nodes[tr.a], B = dom.nodes[tr.b], C = dom.nodes[tr.c];
        const double w = dom.tri_area[t] / 3.0;
        acc += w * (f((A + B) * 0.5, t) + f((B + C) * 0.5, t) + f((C + A) * 0.5, t));
    }
    return {acc, !any};
}

inline double region_area(const DiscreteDomain& dom, RegionSpec region) {
    return quad_region(dom, region, [](Vec2, int) { return 1.0; }).value;
}

inline double nodal_max(const NodalField& w, Ball b) {
    const auto& dom = w.domain();
    double best = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < dom.n_nodes(); ++i)
        if (b.contains(dom.nodes[i])) best = std::max(best, w.values[i]);
    return best;
}

inline double nodal_min(const NodalField& w, Ball b) {
    const auto& dom = w.domain();
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < dom.n_nodes(); ++i)
        if (b.contains(dom.nodes[i])) best = std::min(best, w.values[i]);
    return best;
}

inline void require_inside(const Shape& shape, Ball b, double factor, const char* who) {
    if (!(b.radius > 0.0) || b.radius > 1.0)
        throw parameter_error(std::string(who) + ": requires 0 < rho <= 1");
    if (shape.boundary_clearance(b.center) < factor * b.radius)
        throw domain_error(std::string(who) + ": ball violates the containment precondition");
}

}  // namespace detail

// (sopo1)/(sopo2): averaged double phase Poincare quotients on balls.
inline InequalityReport check_sobolev_poincare(const NodalField& w, const DoublePhaseSpec& spec,
                                               const std::vector<Ball>& balls, double d1,
                                               double d2) {
    if (!(d1 > 0.0 && d1 < 1.0))
        throw parameter_error("check_sobolev_poincare: d1 must lie in (0,1)");
    const double n = 2.0;
    const double d2_max =
        spec.p() < n ? n * spec.p() / (spec.q() * (n - spec.p())) : std::numeric_limits<double>::infinity();
    if (!(d2 > 1.0 && d2 <= d2_max))
        throw parameter_error("check_sobolev_poincare: d2 outside (1, np/(q(n-p))]");

    const auto& dom = w.domain();
    InequalityReport rep;
    rep.name = "sobolev_poincare";
    rep.extras["d1"] = d1;
    rep.extras["d2"] = d2;
    for (const Ball& b : balls) {
        detail::require_inside(dom.shape, b, 1.0, "check_sobolev_poincare");
        const auto region = RegionSpec::ball(b);
        const double area = detail::region_area(dom, region);
        if (area <= 0.0) continue;
        const double mean =
            detail::quad_region(dom, region, [&](Vec2 x, int t) { return w.value_at(t, x); })
                .value /
            area;
        auto Hquot = [&](Vec2 x, int t) {
            return eval_H(spec, x, std::abs(w.value_at(t, x) - mean) / b.radius);
        };
        auto Hgrad = [&](Vec2 x, int t) { return eval_H(spec, x, w.gradient(t)); };

        const double lhs1 = detail::quad_region(dom, region, Hquot).value / area;
        const double rhs1 = std::pow(
            detail::quad_region(dom, region, [&](Vec2 x, int t) { return std::pow(Hgrad(x, t), d1); })
                    .value /
                area,
            1.0 / d1);
        SampleRow r1{b.center, b.radius, 1.0, lhs1, rhs1, 0.0, false};
        if (rhs1 <= 1e-20 && lhs1 <= 1e-20)
            r1.degenerate = true;
        else
            r1.ratio = lhs1 / rhs1;
        rep.push(r1);

        const double lhs2 = std::pow(
            detail::quad_region(dom, region, [&](Vec2 x, int t) { return std::pow(Hquot(x, t), d2); })
                    .value /
                area,
            1.0 / d2);
        const double rhs2 = detail::quad_region(dom, region, Hgrad).value / area;
        SampleRow r2{b.center, b.radius, 2.0, lhs2, rhs2, 0.0, false};
        if (rhs2 <= 1e-20 && lhs2 <= 1e-20)
            r2.degenerate = true;
        else
            r2.ratio = lhs2 / rhs2;
        rep.push(r2);
    }
    return rep;
}

// Caccioppoli inequality for positive supersolutions with a cutoff eta.
inline InequalityReport check_caccioppoli(const NodalField& vtilde, const DoublePhaseSpec& spec,
                                          Ball ball, double gamma, const NodalField& eta) {
    if (!(gamma > 1.0 && gamma < spec.p()))
        throw parameter_error("check_caccioppoli: gamma must lie in (1,p)");
    const auto& dom = vtilde.domain();
    detail::require_inside(dom.shape, ball, 1.0, "check_caccioppoli");
    if (detail::nodal_min(vtilde, ball) <= 0.0)
        throw parameter_error("check_caccioppoli: supersolution not positive on the ball");

    const auto region = RegionSpec::ball(ball);
    const double lhs =
        detail::quad_region(dom, region, [&](Vec2 x, int t) {
            const double v = vtilde.value_at(t, x);
            const double e = std::max(0.0, eta.value_at(t, x));
            return std::pow(v, -gamma) * std::pow(e, spec.q()) *
                   eval_H(spec, x, vtilde.gradient(t));
        }).value;
    const double rhs =
        detail::quad_region(dom, region, [&](Vec2 x, int t) {
            const double v = vtilde.value_at(t, x);
            return std::pow(v, -gamma) * eval_H(spec, x, eta.gradient(t).norm() * v);
        }).value;

    InequalityReport rep;
    rep.name = "caccioppoli";
    rep.extras["gamma"] = gamma;
    SampleRow row{ball.center, ball.radius, gamma, lhs, rhs, 0.0, false};
    if (lhs <= 1e-300 && rhs <= 1e-300)
        row.degenerate = true;
    else
        row.ratio = lhs / std::max(rhs, 1e-300);
    rep.push(row);
    return rep;
}

// Reverse-Holder inequality (Gehring) for H(., Dv); the classical statement
// mixes an averaged left side with a non-averaged obstacle term on the right.
// Both that form and the fully averaged variant are reported.
inline InequalityReport check_gehring(const NodalField& v, const DoublePhaseSpec& spec,
                                      const NodalField* psi, const std::vector<Ball>& balls,
                                      const std::vector<double>& deltas,
                                      double bounded_budget = 100.0) {
    const auto& dom = v.domain();
    InequalityReport rep;
    rep.name = "gehring";
    double worst_avg = 0.0;
    double delta0 = 0.0;
    for (double delta : deltas) {
        double worst_for_delta = 0.0;
        bool any = false;
        for (const Ball& b : balls) {
            detail::require_inside(dom.shape, b, 1.0, "check_gehring");
            const auto inner = RegionSpec::ball({b.center, b.radius / 2.0});
            const auto outer = RegionSpec::ball(b);
            const double ai = detail::region_area(dom, inner);
            const double ao = detail::region_area(dom, outer);
            if (ai <= 0.0 || ao <= 0.0) continue;
            auto Hv = [&](Vec2 x, int t) { return eval_H(spec, x, v.gradient(t)); };
            const double lhs = std::pow(
                detail::quad_region(dom, inner, [&](Vec2 x, int t) {
                    return std::pow(Hv(x, t), 1.0 + delta);
                }).value / ai,
                1.0 / (1.0 + delta));
            double psi_term = 0.0, psi_term_avg = 0.0;
            if (psi) {
                const double raw = detail::quad_region(dom, outer, [&](Vec2 x, int t) {
                                       return std::pow(eval_H(spec, x, psi->gradient(t)),
                                                       1.0 + delta);
                                   }).value;
                psi_term = std::pow(raw, 1.0 / (1.0 + delta));
                psi_term_avg = std::pow(raw / ao, 1.0 / (1.0 + delta));
            }
            const double mean_term =
                detail::quad_region(dom, outer, Hv).value / ao;
            const double rhs = psi_term + mean_term;
            const double rhs_avg = psi_term_avg + mean_term;
            SampleRow row{b.center, b.radius, delta, lhs, rhs, 0.0, false};
            if (lhs <= 1e-300 && rhs <= 1e-300) {
                row.degenerate = true;
            } else {
                row.ratio = lhs / std::max(rhs, 1e-300);
                worst_for_delta = std::max(worst_for_delta, row.ratio);
                worst_avg = std::max(worst_avg, lhs / std::max(rhs_avg, 1e-300));
                any = true;
            }
            rep.push(row);
        }
        if (any && worst_for_delta <= bounded_budget) delta0 = std::max(delta0, delta);
    }
    rep.extras["empirical_delta0"] = delta0;
    rep.extras["worst_ratio_averaged"] = worst_avg;
    return rep;
}

// De Giorgi boundedness surrogate: the local sup norm and the inputs the
// theoretical bound depends on.
inline InequalityReport check_boundedness(const NodalField& v, const DoublePhaseSpec& spec,
                                          const NodalField* psi, Ball subdomain) {
    const auto& dom = v.domain();
    detail::require_inside(dom.shape, subdomain, 0.0, "check_boundedness");
    InequalityReport rep;
    rep.name = "boundedness";
    double sup = 0.0;
    for (int i = 0; i < dom.n_nodes(); ++i)
        if (subdomain.contains(dom.nodes[i])) sup = std::max(sup, std::abs(v.values[i]));
    const double energy =
        integrate(v, [&](Vec2 x, double, Vec2 g) { return eval_H(spec, x, g); }).value;
    rep.extras["H_Dv_L1"] = energy;
    if (psi) {
        double psup = 0.0;
        for (double t : psi->values) psup = std::max(psup, std::abs(t));
        rep.extras["psi_Linf"] = psup;
    }
    SampleRow row{subdomain.center, subdomain.radius, 0.0, sup, 1.0, sup, false};
    rep.push(row);
    return rep;
}

// (30): local boundedness of (v - M)+ by its integral means; (32): weak
// Harnack for a nonnegative supersolution vtilde. Rows with param > 0 carry
// the h-exponents of (30); rows with param < 0 carry -h_minus for (32).
inline InequalityReport check_harnack(const NodalField& v, double M, const NodalField& vtilde,
                                      const DoublePhaseSpec& spec, const NodalField* psi,
                                      Ball ball, const std::vector<double>& h_grid,
                                      const std::vector<double>& hminus_grid,
                                      double bounded_budget = 100.0) {
    const auto& dom = v.domain();
    if (dom.shape.boundary_clearance(ball.center) < ball.radius + 0.02)
        throw domain_error("check_harnack: ball too close to the boundary");
    detail::require_inside(dom.shape, ball, 1.0, "check_harnack");
    if (psi && M < detail::nodal_max(*psi, ball) - 1e-12)
        throw parameter_error("check_harnack: M must dominate the obstacle on the ball");
    InequalityReport rep;
    rep.name = "harnack";
    (void)spec;

    const Ball half{ball.center, ball.radius / 2.0};
    const auto region = RegionSpec::ball(ball);
    const double area = detail::region_area(dom, region);

    for (double h : h_grid) {
        const double lhs = std::max(0.0, detail::nodal_max(v, half) - M);
        const double rhs = std::pow(
            detail::quad_region(dom, region, [&](Vec2 x, int t) {
                return std::pow(std::max(0.0, v.value_at(t, x) - M), h);
            }).value / area,
            1.0 / h);
        SampleRow row{ball.center, ball.radius, h, lhs, rhs, 0.0, false};
        if (lhs <= 1e-14 && rhs <= 1e-14)
            row.degenerate = true;  // (v-M)+ vanishes; skipped with flag
        else
            row.ratio = lhs / std::max(rhs, 1e-300);
        rep.push(row);
    }

    if (detail::nodal_min(vtilde, ball) < 0.0)
        throw parameter_error("check_harnack: vtilde must be nonnegative on the ball");
    double hminus_ok = 0.0;
    for (double hm : hminus_grid) {
        const double lhs = std::pow(
            detail::quad_region(dom, region, [&](Vec2 x, int t) {
                return std::pow(std::max(0.0, vtilde.value_at(t, x)), hm);
            }).value / area,
            1.0 / hm);
        const double rhs = detail::nodal_min(vtilde, half);
        SampleRow row{ball.center, ball.radius, -hm, lhs, rhs, 0.0, false};
        if (lhs <= 1e-14 && rhs <= 1e-14)
            row.degenerate = true;
        else
            row.ratio = lhs / std::max(rhs, 1e-300);
        rep.push(row);
        if (!row.degenerate && row.ratio <= bounded_budget) hminus_ok = std::max(hminus_ok, hm);
    }
    rep.extras["empirical_h_minus"] = hminus_ok;
    return rep;
}

// Oscillation decay across the contact set: osc_{B_rho} v <= c osc_{B_2rho}
// psi on contact balls, plus the plain maximum principle on contact-free
// balls and a sampled Holder-seminorm quotient.
inline InequalityReport check_oscillation_decay(const NodalField& v, const NodalField& psi,
                                                const std::vector<int>& contact_nodes,
                                                const DoublePhaseSpec&,
                                                const std::vector<Vec2>& centers, double rho,
                                                double beta0) {
    const auto& dom = v.domain();
    InequalityReport rep;
    rep.name = "oscillation_decay";
    rep.extras["beta0"] = beta0;
    for (const Vec2& c : centers) {
        detail::require_inside(dom.shape, {c, rho}, 4.0, "check_oscillation_decay");
        const Ball b1{c, rho}, b2{c, 2.0 * rho};
        bool touches_contact = false;
        for (int i : contact_nodes)
            if (b1.contains(dom.nodes[i])) touches_contact = true;
        const double osc_v1 = detail::nodal_max(v, b1) - detail::nodal_min(v, b1);
        if (touches_contact) {
            const double osc_psi2 = detail::nodal_max(psi, b2) - detail::nodal_min(psi, b2);
            SampleRow row{c, rho, 1.0, osc_v1, osc_psi2, 0.0, false};
            if (osc_psi2 <= 1e-14 && osc_v1 <= 1e-10)
                row.degenerate = true;  // constant obstacle forces near-constant v
            else
                row.ratio = osc_v1 / std::max(osc_psi2, 1e-300);
            rep.push(row);
        } else {
            // A-harmonic on the ball: oscillation cannot grow inward
            const double osc_v2 = detail::nodal_max(v, b2) - detail::nodal_min(v, b2);
            SampleRow row{c, rho, -1.0, osc_v1, osc_v2, 0.0, false};
            if (osc_v2 <= 1e-14)
                row.degenerate = true;
            else
                row.ratio = osc_v1 / osc_v2;
            rep.push(row);
        }
    }

    // sampled Holder seminorms over the subdomain spanned by the centers
    double vsemi = 0.0, psemi = 0.0;
    Rng rng(kBallSamplerSeed ^ 0x5eed);
    const int N = dom.n_nodes();
    for (int k = 0; k < 4000; ++k) {
        const int i = static_cast<int>(rng.next_u64() % N);
        const int j = static_cast<int>(rng.next_u64() % N);
        const double d = dist(dom.nodes[i], dom.nodes[j]);
        if (d < 1e-9) continue;
        const double db = std::pow(d, beta0);
        vsemi = std::max(vsemi, std::abs(v.values[i] - v.values[j]) / db);
        psemi = std::max(psemi, std::abs(psi.values[i] - psi.values[j]) / db);
    }
    rep.extras["v_seminorm"] = vsemi;
    rep.extras["psi_seminorm"] = psemi;
    if (psemi > 0.0) rep.extras["seminorm_ratio"] = vsemi / psemi;
    return rep;
}

// Contact-set measure density: mu(B_rho(xbar)) against the H_sigma kernel
// integral, on contact points xbar in K, with the 1/40 geometric rule.
inline InequalityReport check_measure_density(const NodalField& v, const ResidualMeasure& mu,
                                              const DoublePhaseSpec& spec,
                                              const std::vector<Vec2>& K, double beta0,
                                              const std::vector<double>& rho_grid) {
    const auto& dom = v.domain();
    double dist_K = std::numeric_limits<double>::infinity();
    for (const Vec2& x : K) dist_K = std::min(dist_K, dom.shape.boundary_clearance(x));
    const double rho_cap = std::min(1.0, dist_K) / 40.0;
    for (double rho : rho_grid)
        if (!(rho > 0.0 && rho < rho_cap))
            throw parameter_error("check_measure_density: rho grid violates the 1/40 rule");

    const double sigma = sigma_exponent(beta0, spec);
    InequalityReport rep;
    rep.name = "measure_density";
    rep.extras["sigma"] = sigma;
    rep.extras["beta0"] = beta0;
    for (const Vec2& x : K) {
        for (double rho : rho_grid) {
            const Ball b{x, rho};
            const double m = mu.on_ball(dom, b);
            const double kernel = ball_premeasure(spec, HausdorffKernel::modified(sigma), b);
            SampleRow row{x, rho, sigma, m, kernel, 0.0, false};
            if (m <= 1e-14 && kernel <= 1e-300)
                row.degenerate = true;
            else
                row.ratio = std::max(0.0, m) / std::max(kernel, 1e-300);
            rep.push(row);
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Benchmark runner: one obstacle solve per mesh level, all checks evaluated
// on both levels with the same geometric balls, worst ratios compared.

struct RegularityBenchmark {
    DoublePhaseSpec spec;
    double base_h = 1.0 / 48;
    double cone_height = 0.5;   // obstacle c0 - c1 |x|
    double cone_slope = 1.0;
    int n_balls = 20;
    std::vector<double> delta_grid{0.05, 0.1, 0.25, 0.5};
    std::vector<double> h_grid{0.5, 1.0, 2.0};
    std::vector<double> hminus_grid{0.1, 0.25, 0.5};
    std::vector<double> rho_density{0.02, 0.015};
    double beta0 = 1.0;
};

struct CheckTrend {
    InequalityReport coarse;
    InequalityReport fine;
    double drift() const {
        if (coarse.worst_ratio <= 0.0 && fine.worst_ratio <= 0.0) return 1.0;
        if (coarse.worst_ratio <= 0.0 || fine.worst_ratio <= 0.0) return 1.0;
        const double r = fine.worst_ratio / coarse.worst_ratio;
        return std::max(r, 1.0 / r);
    }
    bool pass(double budget = 2.0) const {
        return coarse.finite() && fine.finite() && drift() < budget;
    }
};

struct RegularityLabResult {
    std::vector<CheckTrend> checks;
    bool all_pass(double budget = 2.0) const {
        for (const auto& c : checks)
            if (!c.pass(budget)) return false;
        return !checks.empty();
    }
};

inline RegularityLabResult run_regularity_lab(const RegularityBenchmark& bench) {
    const auto& spec = bench.spec;
    auto field = MonotoneField::prototype(spec);

    auto coarse = build_domain(DomainSpec::unit_disk(), bench.base_h);
    auto fine = refine(coarse);

    auto psi_fn = [&](Vec2 p) { return bench.cone_height - bench.cone_slope * p.norm(); };
    const double gamma = (1.0 + spec.p()) / 2.0;
    const double d1 = 0.75;
    const double n = 2.0;
    const double d2_cap = spec.p() < n ? n * spec.p() / (spec.q() * (n - spec.p()))
                                       : std::numeric_limits<double>::infinity();
    const double d2 = std::min(1.5, d2_cap);

    const auto ball_med = sample_ball_centers(Shape::unit_disk(), 0.2, 1.0, bench.n_balls);
    const auto ball_osc =
        sample_ball_centers(Shape::unit_disk(), 0.1, 4.0, bench.n_balls, kBallSamplerSeed + 1);

    struct Level {
        SolveReport rep;
        ResidualMeasure mu;
        const DiscreteDomain* dom;
    };
    auto solve_level = [&](const DiscreteDomain& dom) {
        auto psi = NodalField::interpolate(dom, psi_fn);
        auto g = NodalField::interpolate(dom, [](Vec2) { return 0.0; });
        ObstacleProblem prob{field, &dom, psi, g};
        auto rep = solve_obstacle(prob);
        auto mu = residual_measure(rep, field, dom);
        return Level{rep, mu, &dom};
    };
    Level L0 = solve_level(coarse);
    Level L1 = solve_level(fine);

    // contact points shared across levels: coarse active nodes near the apex
    std::vector<Vec2> K;
    for (int i : L0.rep.active_set) {
        if (coarse.nodes[i].norm() < 0.05 && K.size() < 5) K.push_back(coarse.nodes[i]);
    }
    if (K.empty()) K.push_back({0.0, 0.0});

    auto run_checks = [&](const Level& L) {
        const auto& dom = *L.dom;
        auto psi = NodalField::interpolate(dom, psi_fn);
        std::vector<InequalityReport> reps;

        std::vector<Ball> poincare_balls;
        for (const auto& c : ball_med) poincare_balls.push_back({c, 0.2});
        reps.push_back(check_sobolev_poincare(L.rep.solution, spec, poincare_balls, d1, d2));

        // positive shift of the solution stays a supersolution
        auto vt = L.rep.solution;
        const double shift = 0.1 - vt.min_value();
        for (auto& x : vt.values) x += shift;
        auto eta = cutoff(dom, 0.25, 0.5, {0.0, 0.0});
        reps.push_back(check_caccioppoli(vt, spec, {{0.0, 0.0}, 0.6}, gamma, eta));

        reps.push_back(check_gehring(L.rep.solution, spec, &psi, poincare_balls,
                                     bench.delta_grid));

        reps.push_back(check_boundedness(L.rep.solution, spec, &psi, {{0.0, 0.0}, 0.8}));

        const Ball hb{{0.0, 0.0}, 0.5};
        const double M = detail::nodal_max(psi, hb);
        reps.push_back(check_harnack(L.rep.solution, M, vt, spec, &psi, hb, bench.h_grid,
                                     bench.hminus_grid));

        std::vector<int> contact;
        for (int i : L.rep.active_set) contact.push_back(i);
        reps.push_back(check_oscillation_decay(L.rep.solution, psi, contact, spec, ball_osc,
                                               0.1, bench.beta0));

        reps.push_back(check_measure_density(L.rep.solution, L.mu, spec, K, bench.beta0,
                                             bench.rho_density));
        return reps;
    };

    const auto r0 = run_checks(L0);
    const auto r1 = run_checks(L1);
    RegularityLabResult out;
    for (size_t i = 0; i < r0.size(); ++i) out.checks.push_back({r0[i], r1[i]});
    return out;
}

}  // namespace dplab
