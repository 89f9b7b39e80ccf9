#pragma once

// Removability experiment: a candidate u that solves the equation off a
// closed set E is bracketed between the obstacle solution v above u and the
// reflected obstacle solution vhat above -u. If the residual mass near E of
// both barriers decays under refinement and max|v + vhat| collapses, the run
// is consistent with E being removable; persistent mass is the non-removable
// signature. A Hausdorff decay study of E with the H_sigma kernel is attached
// as a cross-check of the measure hypothesis.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "dplab/candidates.hpp"
#include "dplab/caphaus.hpp"
#include "dplab/double_phase.hpp"
#include "dplab/mesh.hpp"
#include "dplab/solve.hpp"

namespace dplab {

enum class RemovabilityClass { removable_consistent, non_removable, inconclusive };

inline const char* to_string(RemovabilityClass v) {
    switch (v) {
        case RemovabilityClass::removable_consistent: return "removable-consistent";
        case RemovabilityClass::non_removable: return "non-removable";
        case RemovabilityClass::inconclusive: return "inconclusive";
    }
    return "?";
}

struct RemovabilityConfig {
    MonotoneField field;
    DomainSpec domain = DomainSpec::unit_disk();
    double h = 1.0 / 24;
    SetDescriptor E;
    AnalyticField candidate;
    SolverOptions opts;
    double atom_floor = 1e-6;  // residual mass below this counts as zero
    double gap_floor = 5e-8;   // barrier gap below this counts as closed
};

struct RemovabilityLevel {
    double h = 0.0;
    int nodes = 0;
    double mu_on_E = 0.0;   // both barriers' atoms within 2h of E
    double mu_off_E = 0.0;
    double barrier_gap = 0.0;      // max |v + vhat|
    double sandwich_v_u = 0.0;     // min (v - u); must be >= -tol
    double sandwich_u_vhat = 0.0;  // min (u + vhat); must be >= -tol
    int iterations = 0;
};

struct RemovabilityVerdict {
    std::vector<RemovabilityLevel> levels;
    RemovabilityClass verdict = RemovabilityClass::inconclusive;
    double sigma = 1.0;
    DecayStudy measure_check;  // H_sigma decay classification of E
};

// Classification rule, given the two refinement levels. Residual mass below
// atom_floor counts as zero; removable-consistent demands decayed (and never
// grown) mass together with a collapsing barrier gap; mass that stays above
// 100x the floor without halving is the non-removable signature.
inline RemovabilityClass classify_removability(const RemovabilityLevel& coarse,
                                               const RemovabilityLevel& fine,
                                               double atom_floor, double gap_floor) {
    const bool mu_decayed =
        fine.mu_on_E <= 0.5 * coarse.mu_on_E || fine.mu_on_E <= atom_floor;
    const bool mu_increased = fine.mu_on_E > coarse.mu_on_E && fine.mu_on_E > atom_floor;
    const bool gap_closed =
        fine.barrier_gap <= 0.5 * coarse.barrier_gap || fine.barrier_gap <= gap_floor;
    const bool mu_persists =
        fine.mu_on_E >= 0.5 * coarse.mu_on_E && fine.mu_on_E > 100.0 * atom_floor;
    if (mu_decayed && !mu_increased && gap_closed)
        return RemovabilityClass::removable_consistent;
    if (mu_persists) return RemovabilityClass::non_removable;
    return RemovabilityClass::inconclusive;
}

inline RemovabilityVerdict run_removability(const RemovabilityConfig& cfg) {
    if (!cfg.candidate.holder)
        throw config_error("removability: candidate '" + cfg.candidate.id +
                           "' carries no Holder certificate");
    if (cfg.E.empty()) throw config_error("removability: empty defect set");
    const auto& spec = cfg.field.spec();
    const double beta0 = cfg.candidate.holder->beta0;

    RemovabilityVerdict out;
    out.sigma = sigma_exponent(beta0, spec);
    out.measure_check =
        measure_decay_study(cfg.E, HausdorffKernel::modified(out.sigma), spec,
                            cfg.domain.shape, {1.0 / 8, 1.0 / 16, 1.0 / 32, 1.0 / 64});

    const auto reflected = reflected_field(cfg.field);
    DomainSpec base = cfg.domain;
    base.excluded.reset();  // barriers are solved on the full mesh of U
    auto dom = build_domain(base, cfg.h);

    for (int level = 0; level < 2; ++level) {
        auto u = NodalField::interpolate(dom, [&](Vec2 p) { return cfg.candidate(p); });
        auto minus_u = u;
        for (auto& t : minus_u.values) t = -t;

        ObstacleProblem upper{cfg.field, &dom, u, u};
        auto v = solve_obstacle(upper, cfg.opts);
        ObstacleProblem lower{reflected, &dom, minus_u, minus_u};
        auto vhat = solve_obstacle(lower, cfg.opts);

        const auto mu_v = residual_measure(v, cfg.field, dom);
        const auto mu_vhat = residual_measure(vhat, reflected, dom);

        RemovabilityLevel L;
        L.h = dom.h;
        L.nodes = dom.n_nodes();
        L.iterations = v.iterations + vhat.iterations;
        const double near = 2.0 * dom.h;
        for (int i = 0; i < dom.n_nodes(); ++i) {
            const double atoms = mu_v.atoms[i] + mu_vhat.atoms[i];
            if (cfg.E.distance(dom.nodes[i]) <= near)
                L.mu_on_E += atoms;
            else
                L.mu_off_E += atoms;
        }
        L.barrier_gap = 0.0;
        L.sandwich_v_u = 1e300;
        L.sandwich_u_vhat = 1e300;
        for (int i = 0; i < dom.n_nodes(); ++i) {
            L.barrier_gap =
                std::max(L.barrier_gap, std::abs(v.solution.values[i] + vhat.solution.values[i]));
            L.sandwich_v_u = std::min(L.sandwich_v_u, v.solution.values[i] - u.values[i]);
            L.sandwich_u_vhat =
                std::min(L.sandwich_u_vhat, u.values[i] + vhat.solution.values[i]);
        }
        out.levels.push_back(L);
        if (level == 0) dom = refine(dom);
    }

    out.verdict =
        classify_removability(out.levels[0], out.levels[1], cfg.atom_floor, cfg.gap_floor);
    return out;
}

}  // namespace dplab
