#pragma once

// Intrinsic H(.)-capacity by constrained energy minimization and intrinsic
// Hausdorff pre-measures by greedy covering search. The covering value is a
// certified upper bound on the true infimum over countable coverings; decay
// classification is done on log-log slopes, never on absolute values.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "dplab/double_phase.hpp"
#include "dplab/mesh.hpp"
#include "dplab/solve.hpp"

namespace dplab {

struct CapacityProblem {
    DoublePhaseSpec spec;
    const DiscreteDomain* domain = nullptr;
    std::vector<int> K_nodes;
};

inline std::vector<int> nodes_in_disk(const DiscreteDomain& dom, Vec2 center, double radius) {
    std::vector<int> out;
    for (int i = 0; i < dom.n_nodes(); ++i)
        if (dist(dom.nodes[i], center) <= radius * (1.0 + 1e-12)) out.push_back(i);
    return out;
}

// cap(K, Omega) = inf { int H(x, Df) : 0 <= f <= 1, f = 1 on K, f = 0 on
// the boundary }, by the shared projected-Newton path with unit density
// coefficients.
inline double capacity(const CapacityProblem& problem, const SolverOptions& base_opts = {}) {
    const auto& dom = *problem.domain;
    for (int i : problem.K_nodes)
        if (dom.is_boundary[i])
            throw feasibility_error("capacity: compact set touches the outer boundary");
    if (problem.K_nodes.empty()) return 0.0;

    Constraints cons = Constraints::none(dom.n_nodes());
    for (int i = 0; i < dom.n_nodes(); ++i) {
        cons.lower[i] = 0.0;
        cons.upper[i] = 1.0;
    }
    for (int i : dom.boundary_nodes()) cons.fixed_value[i] = 0.0;
    for (int i : problem.K_nodes) cons.fixed_value[i] = 1.0;

    SolverOptions opts = base_opts;
    opts.cp = 1.0;
    opts.cq = 1.0;
    auto field = MonotoneField::prototype(problem.spec);
    NodalField init(dom, 0.0);
    for (int i : problem.K_nodes) init.values[i] = 1.0;
    auto rep = minimize_energy(field, dom, cons, init, opts);
    if (!rep.converged)
        throw solver_error("capacity: no convergence, residual " +
                           std::to_string(rep.final_kkt_residual));
    return rep.energy;
}

// ---------------------------------------------------------------------------
// Intrinsic Hausdorff pre-measures

// Kernel H_sigma(x, 1/rho); sigma = 1 recovers the plain H kernel.
struct HausdorffKernel {
    double sigma = 1.0;
    static HausdorffKernel plain() { return {1.0}; }
    static HausdorffKernel modified(double sigma) { return {sigma}; }
};

// h(B) = int_B kernel(x, 1/rho(B)) dx by a midpoint polar rule, independent
// of any mesh (balls are far smaller than elements).
inline double ball_premeasure(const DoublePhaseSpec& spec, HausdorffKernel kernel, Ball b,
                              int nr = 24, int nth = 48) {
    const double t = 1.0 / b.radius;
    const double dr = b.radius / nr;
    double acc = 0.0;
    for (int i = 0; i < nr; ++i) {
        const double r = (i + 0.5) * dr;
        const double w = 2.0 * M_PI * r * dr / nth;
        for (int k = 0; k < nth; ++k) {
            const double th = 2.0 * M_PI * (k + 0.5) / nth;
            const Vec2 x{b.center.x + r * std::cos(th), b.center.y + r * std::sin(th)};
            acc += w * eval_H_sigma(spec, kernel.sigma, x, t);
        }
    }
    return acc;
}

struct CoveringEstimate {
    SetDescriptor descriptor;
    double delta = 0.0;
    std::vector<Ball> balls;
    double value = 0.0;
    HausdorffKernel kernel;
};

// Near-optimal covering from a dyadic lattice of candidate balls (pitch
// delta/2, radii delta, delta/2, delta/4) by greedy set cover on
// cost-effectiveness. The result is an upper bound on the true pre-measure.
inline CoveringEstimate hausdorff_premeasure(const SetDescriptor& E, double delta,
                                             HausdorffKernel kernel,
                                             const DoublePhaseSpec& spec, const Shape& shape) {
    if (!(delta > 0.0)) throw parameter_error("hausdorff_premeasure: delta must be positive");
    CoveringEstimate est;
    est.descriptor = E;
    est.delta = delta;
    est.kernel = kernel;
    if (E.empty()) return est;

    for (const auto& p : E.sample(delta / 8.0))
        if (shape.boundary_clearance(p) <= 0.0)
            throw domain_error("hausdorff_premeasure: set leaves the domain");

    const auto samples = E.sample(delta / 8.0);

    // candidate centers: lattice of pitch delta/2 over the inflated bounding
    // box, plus the sample points themselves
    double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
    for (const auto& p : samples) {
        x0 = std::min(x0, p.x);
        x1 = std::max(x1, p.x);
        y0 = std::min(y0, p.y);
        y1 = std::max(y1, p.y);
    }
    std::vector<Ball> candidates;
    const double pitch = delta / 2.0;
    for (double cx = x0 - delta; cx <= x1 + delta + 1e-12; cx += pitch)
        for (double cy = y0 - delta; cy <= y1 + delta + 1e-12; cy += pitch)
            for (double rho : {delta, delta / 2.0, delta / 4.0})
                if (shape.contains_ball({{cx, cy}, rho})) candidates.push_back({{cx, cy}, rho});
    for (const auto& p : samples)
        for (double rho : {delta, delta / 2.0, delta / 4.0})
            if (shape.contains_ball({p, rho})) candidates.push_back({p, rho});
    if (candidates.empty())
        throw domain_error("hausdorff_premeasure: set not coverable within the domain");

    std::vector<double> cost(candidates.size());
    for (size_t c = 0; c < candidates.size(); ++c)
        cost[c] = ball_premeasure(spec, kernel, candidates[c]);

    std::vector<bool> covered(samples.size(), false);
    size_t remaining = samples.size();
    while (remaining > 0) {
        int best = -1;
        double best_eff = 0.0;
        int best_gain = 0;
        for (size_t c = 0; c < candidates.size(); ++c) {
            int gain = 0;
            for (size_t s = 0; s < samples.size(); ++s)
                if (!covered[s] &&
                    dist(samples[s], candidates[c].center) <= candidates[c].radius)
                    ++gain;
            if (gain == 0) continue;
            const double eff = gain / std::max(cost[c], 1e-300);
            if (best < 0 || eff > best_eff * (1.0 + 1e-12) ||
                (std::abs(eff - best_eff) <= best_eff * 1e-12 && cost[c] < cost[best])) {
                best = static_cast<int>(c);
                best_eff = eff;
                best_gain = gain;
            }
        }
        if (best < 0)
            throw domain_error("hausdorff_premeasure: set not coverable within the domain");
        est.balls.push_back(candidates[best]);
        est.value += cost[best];
        for (size_t s = 0; s < samples.size(); ++s)
            if (!covered[s] && dist(samples[s], candidates[best].center) <= candidates[best].radius)
                covered[s] = true;
        remaining -= best_gain;
    }
    return est;
}

enum class DecayClass { zero, finite, divergent };

inline const char* to_string(DecayClass c) {
    switch (c) {
        case DecayClass::zero: return "zero";
        case DecayClass::finite: return "finite";
        case DecayClass::divergent: return "divergent";
    }
    return "?";
}

struct DecayStudy {
    struct Row {
        double delta = 0.0;
        double value = 0.0;
        double slope_estimate = 0.0;  // pairwise log-log slope vs previous row
    };
    std::vector<Row> rows;
    double slope = 0.0;  // least-squares fit over all rows
    DecayClass classification = DecayClass::finite;
    bool monotonicity_flagged = false;  // greedy slack produced a decrease
};

inline DecayStudy measure_decay_study(const SetDescriptor& E, HausdorffKernel kernel,
                                      const DoublePhaseSpec& spec, const Shape& shape,
                                      const std::vector<double>& deltas) {
    for (size_t i = 1; i < deltas.size(); ++i)
        if (!(deltas[i] < deltas[i - 1]))
            throw parameter_error("measure_decay_study: deltas must be strictly decreasing");
    DecayStudy study;
    for (size_t i = 0; i < deltas.size(); ++i) {
        const auto est = hausdorff_premeasure(E, deltas[i], kernel, spec, shape);
        DecayStudy::Row row{deltas[i], est.value, 0.0};
        if (i > 0 && est.value > 0.0 && study.rows.back().value > 0.0)
            row.slope_estimate = std::log(est.value / study.rows.back().value) /
                                 std::log(deltas[i] / deltas[i - 1]);
        // smaller delta must not decrease the pre-measure (up to greedy slack)
        if (i > 0 && est.value < study.rows.back().value * (1.0 - 0.25))
            study.monotonicity_flagged = true;
        study.rows.push_back(row);
    }

    double max_val = 0.0;
    for (const auto& r : study.rows) max_val = std::max(max_val, r.value);
    if (max_val <= 1e-14) {
        study.classification = DecayClass::zero;
        return study;
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (const auto& r : study.rows) {
        if (r.value <= 0.0) continue;
        const double lx = std::log(r.delta), ly = std::log(r.value);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++n;
    }
    study.slope = n >= 2 ? (n * sxy - sx * sy) / (n * sxx - sx * sx) : 0.0;
    if (study.slope > 0.15)
        study.classification = DecayClass::zero;
    else if (study.slope < -0.15)
        study.classification = DecayClass::divergent;
    else
        study.classification = DecayClass::finite;
    return study;
}

// Capacity-measure link on a point-like set: runs the measure decay study
// with the plain kernel alongside capacities of shrinking neighborhoods.
struct CapacityMeasureLink {
    DecayStudy measure;
    std::vector<double> epsilons;
    std::vector<double> capacities;
    bool capacity_decreasing = false;
};

inline CapacityMeasureLink capacity_measure_link(const SetDescriptor& E,
                                                 const DoublePhaseSpec& spec,
                                                 const DiscreteDomain& dom,
                                                 const std::vector<double>& epsilons,
                                                 const std::vector<double>& deltas) {
    if (!E.segments.empty())
        throw parameter_error("capacity_measure_link: expects a finite point set");
    CapacityMeasureLink link;
    link.measure = measure_decay_study(E, HausdorffKernel::plain(), spec, dom.shape, deltas);
    link.epsilons = epsilons;
    for (double eps : epsilons) {
        std::vector<int> K;
        for (int i = 0; i < dom.n_nodes(); ++i)
            if (E.distance(dom.nodes[i]) <= eps && !dom.is_boundary[i]) K.push_back(i);
        link.capacities.push_back(capacity({spec, &dom, K}));
    }
    link.capacity_decreasing = true;
    for (size_t i = 1; i < link.capacities.size(); ++i)
        if (link.capacities[i] > link.capacities[i - 1] + 1e-10) link.capacity_decreasing = false;
    return link;
}

}  // namespace dplab
