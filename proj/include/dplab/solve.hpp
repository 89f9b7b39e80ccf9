#pragma once

// Discrete A-harmonic Dirichlet solves and the obstacle variational
// inequality on P1 meshes. The prototype field is the Euler-Lagrange field of
// the double phase energy, so the VI is a strictly convex box-constrained
// minimization; it is solved by projected damped Newton on the regularized
// energy (|z| replaced by sqrt(|z|^2 + eps^2)) with continuation in eps and a
// projected-gradient polish at the end. Custom monotone fields fall back to a
// monitored damped fixed-point iteration.

#include <Eigen/Sparse>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "dplab/double_phase.hpp"
#include "dplab/mesh.hpp"

namespace dplab {

inline constexpr double kNoBound = std::numeric_limits<double>::infinity();

struct SolverOptions {
    std::vector<double> eps_schedule{1e-2, 1e-4, 1e-6};
    double kkt_tol = 1e-8;            // on true residual atoms
    double contact_tol = 1e-8;        // v - psi <= contact_tol marks contact
    double complementarity_tol = 1e-10;
    int max_newton_iter = 120;        // per continuation stage
    int max_polish_iter = 60;
    // energy density coefficients: cp*|z|^p + cq*a(x)*|z|^q
    double cp = 0.0;                  // 0 means 1/p (prototype field potential)
    double cq = 0.0;                  // 0 means 1/q
};

struct Constraints {
    std::vector<double> fixed_value;  // NaN where the node is free
    std::vector<double> lower;        // -inf where unconstrained
    std::vector<double> upper;        // +inf where unconstrained
    std::vector<bool> in_system;      // false drops the node entirely (holed meshes)

    static Constraints none(int n) {
        Constraints c;
        c.fixed_value.assign(n, std::numeric_limits<double>::quiet_NaN());
        c.lower.assign(n, -kNoBound);
        c.upper.assign(n, kNoBound);
        c.in_system.assign(n, true);
        return c;
    }
    bool is_fixed(int i) const { return std::isfinite(fixed_value[i]); }
};

struct SolveReport {
    NodalField solution;
    int iterations = 0;
    double final_kkt_residual = 0.0;  // true-field KKT residual on atoms
    double energy = 0.0;              // integral of the model density at eps = 0
    std::vector<int> active_set;      // interior nodes with v - psi <= contact_tol
    bool converged = false;
    double eps_final = 0.0;
};

struct ResidualMeasure {
    std::vector<double> atoms;  // one per node; zero at boundary/excluded/dropped

    double total() const {
        double s = 0.0;
        for (double a : atoms) s += a;
        return s;
    }
    double on_ball(const DiscreteDomain& dom, Ball b) const {
        double s = 0.0;
        for (int i = 0; i < dom.n_nodes(); ++i)
            if (b.contains(dom.nodes[i])) s += atoms[i];
        return s;
    }
    double near_set(const DiscreteDomain& dom, const SetDescriptor& e, double distance) const {
        double s = 0.0;
        for (int i = 0; i < dom.n_nodes(); ++i)
            if (e.distance(dom.nodes[i]) <= distance) s += atoms[i];
        return s;
    }
};

namespace detail {

// Per-solve cache: mean weight value over the quadrature points of each
// triangle. The gradient is constant per triangle, so the assembled forms
// only see this mean.
struct TriWeights {
    std::vector<double> abar;
    std::vector<bool> kept;  // false for triangles dropped from holed solves
};

inline TriWeights make_tri_weights(const DiscreteDomain& dom, const DoublePhaseSpec& spec,
                                   bool drop_excluded_triangles) {
    TriWeights tw;
    tw.abar.resize(dom.n_triangles());
    tw.kept.assign(dom.n_triangles(), true);
    for (int t = 0; t < dom.n_triangles(); ++t) {
        const auto& tr = dom.triangles[t];
        if (drop_excluded_triangles &&
            (dom.is_excluded[tr.a] || dom.is_excluded[tr.b] || dom.is_excluded[tr.c])) {
            tw.kept[t] = false;
            tw.abar[t] = 0.0;
            continue;
        }
        const Vec2 A = dom.nodes[tr.a], B = dom.nodes[tr.b], C = dom.nodes[tr.c];
        tw.abar[t] =
            (spec.a((A + B) * 0.5) + spec.a((B + C) * 0.5) + spec.a((C + A) * 0.5)) / 3.0;
    }
    return tw;
}

struct EnergyModel {
    const DiscreteDomain* dom;
    const DoublePhaseSpec* spec;
    TriWeights tw;
    double cp, cq;

    double density(double grad2, double abar, double eps) const {
        const double m2 = grad2 + eps * eps;
        return cp * std::pow(m2, spec->p() / 2.0) + cq * abar * std::pow(m2, spec->q() / 2.0);
    }
    // d(density)/d(grad2) * 2  (the coefficient multiplying Dv in the flux)
    double flux_coef(double grad2, double abar, double eps) const {
        const double m2 = grad2 + eps * eps;
        const double p = spec->p(), q = spec->q();
        return cp * p * std::pow(m2, (p - 2.0) / 2.0) +
               cq * q * abar * std::pow(m2, (q - 2.0) / 2.0);
    }
    // derivative of flux_coef with respect to grad2, times 2
    double flux_coef_deriv2(double grad2, double abar, double eps) const {
        const double m2 = grad2 + eps * eps;
        const double p = spec->p(), q = spec->q();
        return cp * p * (p - 2.0) * std::pow(m2, (p - 4.0) / 2.0) +
               cq * q * (q - 2.0) * abar * std::pow(m2, (q - 4.0) / 2.0);
    }

    double energy(const std::vector<double>& v, double eps) const {
        double acc = 0.0;
        for (int t = 0; t < dom->n_triangles(); ++t) {
            if (!tw.kept[t]) continue;
            const auto& tr = dom->triangles[t];
            const auto& g = dom->tri_hat_grad[t];
            const Vec2 grad = v[tr.a] * g[0] + v[tr.b] * g[1] + v[tr.c] * g[2];
            acc += dom->tri_area[t] * density(grad.norm2(), tw.abar[t], eps);
        }
        return acc;
    }

    void gradient(const std::vector<double>& v, double eps, std::vector<double>& out) const {
        out.assign(dom->n_nodes(), 0.0);
        for (int t = 0; t < dom->n_triangles(); ++t) {
            if (!tw.kept[t]) continue;
            const auto& tr = dom->triangles[t];
            const auto& g = dom->tri_hat_grad[t];
            const Vec2 grad = v[tr.a] * g[0] + v[tr.b] * g[1] + v[tr.c] * g[2];
            const double g2 = grad.norm2();
            if (g2 == 0.0 && eps == 0.0) continue;  // A(x,0) = 0
            const double c = dom->tri_area[t] * flux_coef(g2, tw.abar[t], eps);
            for (int k = 0; k < 3; ++k) out[tr[k]] += c * grad.dot(g[k]);
        }
    }
};

}  // namespace detail

// Core box/obstacle-constrained minimizer shared by the Dirichlet solver, the
// obstacle solver, and the capacity minimizer.
inline SolveReport minimize_energy(const MonotoneField& field, const DiscreteDomain& dom,
                                   const Constraints& cons, const NodalField& init,
                                   const SolverOptions& opts = {},
                                   bool drop_excluded_triangles = false) {
    const auto& spec = field.spec();
    detail::EnergyModel model{&dom, &spec,
                              detail::make_tri_weights(dom, spec, drop_excluded_triangles),
                              opts.cp > 0.0 ? opts.cp : 1.0 / spec.p(),
                              opts.cq > 0.0 ? opts.cq : 1.0 / spec.q()};

    const int n = dom.n_nodes();
    std::vector<double> v = init.values;
    std::vector<char> dof(n, 0);
    for (int i = 0; i < n; ++i) {
        if (cons.is_fixed(i)) v[i] = cons.fixed_value[i];
        v[i] = std::clamp(v[i], cons.lower[i], cons.upper[i]);
        dof[i] = cons.in_system[i] && !cons.is_fixed(i);
    }

    auto project = [&](std::vector<double>& w) {
        for (int i = 0; i < n; ++i)
            if (dof[i]) w[i] = std::clamp(w[i], cons.lower[i], cons.upper[i]);
    };

    auto kkt_residual = [&](const std::vector<double>& g) {
        double worst = 0.0;
        for (int i = 0; i < n; ++i) {
            if (!dof[i]) continue;
            const bool at_lo = v[i] <= cons.lower[i] + opts.contact_tol;
            const bool at_hi = v[i] >= cons.upper[i] - opts.contact_tol;
            if (at_lo)
                worst = std::max(worst, std::max(0.0, -g[i]));
            else if (at_hi)
                worst = std::max(worst, std::max(0.0, g[i]));
            else
                worst = std::max(worst, std::abs(g[i]));
        }
        return worst;
    };

    std::vector<double> grad(n), trial(n);
    int total_iters = 0;
    // loose on the early continuation stages, tight on the last
    const std::vector<double> stage_tol = [&] {
        std::vector<double> tols;
        const size_t S = opts.eps_schedule.size();
        for (size_t s = 0; s < S; ++s)
            tols.push_back(s + 1 == S ? 1e-12 : std::pow(10.0, -6.0 - 3.0 * double(s)));
        return tols;
    }();

    for (size_t stage = 0; stage < opts.eps_schedule.size(); ++stage) {
        const double eps = opts.eps_schedule[stage];
        const double tol = std::max(stage_tol[stage], 1e-13);
        for (int it = 0; it < opts.max_newton_iter; ++it) {
            model.gradient(v, eps, grad);
            if (kkt_residual(grad) <= tol) break;
            ++total_iters;

            // freeze bound-active nodes whose multiplier sign is consistent
            std::vector<int> sys(n, -1);
            int m = 0;
            for (int i = 0; i < n; ++i) {
                if (!dof[i]) continue;
                const bool lock_lo = v[i] <= cons.lower[i] + opts.contact_tol && grad[i] > 0.0;
                const bool lock_hi = v[i] >= cons.upper[i] - opts.contact_tol && grad[i] < 0.0;
                if (!lock_lo && !lock_hi) sys[i] = m++;
            }
            if (m == 0) break;

            std::vector<Eigen::Triplet<double>> trips;
            trips.reserve(dom.n_triangles() * 9);
            for (int t = 0; t < dom.n_triangles(); ++t) {
                if (!model.tw.kept[t]) continue;
                const auto& tr = dom.triangles[t];
                const auto& gh = dom.tri_hat_grad[t];
                const Vec2 gv = v[tr.a] * gh[0] + v[tr.b] * gh[1] + v[tr.c] * gh[2];
                const double area = dom.tri_area[t];
                const double c = area * model.flux_coef(gv.norm2(), model.tw.abar[t], eps);
                const double d = area * model.flux_coef_deriv2(gv.norm2(), model.tw.abar[t], eps);
                for (int a = 0; a < 3; ++a) {
                    const int ia = sys[tr[a]];
                    if (ia < 0) continue;
                    for (int b = 0; b < 3; ++b) {
                        const int ib = sys[tr[b]];
                        if (ib < 0) continue;
                        trips.emplace_back(ia, ib,
                                           c * gh[a].dot(gh[b]) +
                                               d * gv.dot(gh[a]) * gv.dot(gh[b]));
                    }
                }
            }
            Eigen::SparseMatrix<double> H(m, m);
            H.setFromTriplets(trips.begin(), trips.end());
            Eigen::VectorXd rhs(m);
            for (int i = 0; i < n; ++i)
                if (sys[i] >= 0) rhs[sys[i]] = -grad[i];
            Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(H);
            if (ldlt.info() != Eigen::Success)
                throw solver_error("minimize_energy: Hessian factorization failed");
            const Eigen::VectorXd d = ldlt.solve(rhs);

            const double J0 = model.energy(v, eps);
            double slope = 0.0;
            for (int i = 0; i < n; ++i)
                if (sys[i] >= 0) slope += grad[i] * d[sys[i]];
            double alpha = 1.0;
            bool accepted = false;
            for (int ls = 0; ls < 40; ++ls) {
                trial = v;
                for (int i = 0; i < n; ++i)
                    if (sys[i] >= 0) trial[i] += alpha * d[sys[i]];
                project(trial);
                if (model.energy(trial, eps) <= J0 + 1e-4 * alpha * slope + 1e-15 * (1 + std::abs(J0))) {
                    v = trial;
                    accepted = true;
                    break;
                }
                alpha *= 0.5;
            }
            if (!accepted) break;  // stagnation at this stage; continuation proceeds
        }
    }

    // 0-limit polish: projected gradient on the bare energy, diagonal
    // preconditioner from the regularized Hessian.
    {
        const double eps0 = 1e-9;
        for (int it = 0; it < opts.max_polish_iter; ++it) {
            model.gradient(v, eps0, grad);
            if (kkt_residual(grad) <= 0.25 * opts.kkt_tol) break;
            ++total_iters;
            std::vector<double> diag(n, 0.0);
            for (int t = 0; t < dom.n_triangles(); ++t) {
                if (!model.tw.kept[t]) continue;
                const auto& tr = dom.triangles[t];
                const auto& gh = dom.tri_hat_grad[t];
                const Vec2 gv = v[tr.a] * gh[0] + v[tr.b] * gh[1] + v[tr.c] * gh[2];
                const double c =
                    dom.tri_area[t] * model.flux_coef(gv.norm2(), model.tw.abar[t], eps0);
                for (int k = 0; k < 3; ++k) diag[tr[k]] += c * gh[k].norm2();
            }
            const double J0 = model.energy(v, eps0);
            double alpha = 1.0;
            bool accepted = false;
            for (int ls = 0; ls < 30; ++ls) {
                trial = v;
                for (int i = 0; i < n; ++i)
                    if (dof[i] && diag[i] > 0.0) trial[i] -= alpha * grad[i] / diag[i];
                project(trial);
                if (model.energy(trial, eps0) <= J0 + 1e-15 * (1 + std::abs(J0))) {
                    v = trial;
                    accepted = true;
                    break;
                }
                alpha *= 0.5;
            }
            if (!accepted) break;
        }
    }

    SolveReport rep{NodalField(dom, v), total_iters, 0.0, 0.0, {}, false,
                    opts.eps_schedule.empty() ? 0.0 : opts.eps_schedule.back()};
    model.gradient(v, 0.0, grad);
    rep.final_kkt_residual = kkt_residual(grad);
    rep.energy = model.energy(v, 0.0);
    for (int i = 0; i < n; ++i)
        if (dof[i] && v[i] <= cons.lower[i] + opts.contact_tol) rep.active_set.push_back(i);
    rep.converged = rep.final_kkt_residual <= opts.kkt_tol;
    return rep;
}

struct ObstacleProblem {
    MonotoneField field;
    const DiscreteDomain* domain = nullptr;
    std::optional<NodalField> psi;  // empty marker means obstacle -infinity
    NodalField g;

    bool admissible() const {
        if (!psi) return true;
        for (int i : domain->boundary_nodes())
            if (psi->values[i] > g.values[i] + 1e-12) return false;
        return true;
    }
};

namespace detail {

inline SolveReport solve_custom_field(const MonotoneField& field, const DiscreteDomain& dom,
                                      const Constraints& cons, const NodalField& init,
                                      const SolverOptions& opts);

}  // namespace detail

// Residual atoms  atom_i = int A(x, Dv) . D phi_i dx  at interior,
// non-excluded nodes, with the exact (unregularized) field.
inline ResidualMeasure residual_measure(const SolveReport& report, const MonotoneField& field,
                                        const DiscreteDomain& dom) {
    ResidualMeasure mu;
    mu.atoms.assign(dom.n_nodes(), 0.0);
    const auto& v = report.solution;
    for (int t = 0; t < dom.n_triangles(); ++t) {
        const auto& tr = dom.triangles[t];
        const auto& gh = dom.tri_hat_grad[t];
        const Vec2 gv = v.gradient(t);
        const Vec2 A = dom.nodes[tr.a], B = dom.nodes[tr.b], C = dom.nodes[tr.c];
        const Vec2 mids[3] = {(A + B) * 0.5, (B + C) * 0.5, (C + A) * 0.5};
        Vec2 flux{0.0, 0.0};
        for (const Vec2& xm : mids) flux += field(xm, gv);
        flux = flux * (dom.tri_area[t] / 3.0);
        for (int k = 0; k < 3; ++k) mu.atoms[tr[k]] += flux.dot(gh[k]);
    }
    for (int i = 0; i < dom.n_nodes(); ++i)
        if (dom.is_boundary[i] || dom.is_excluded[i]) mu.atoms[i] = 0.0;
    return mu;
}

inline SolveReport solve_a_harmonic(const MonotoneField& field, const DiscreteDomain& dom,
                                    const NodalField& g, const SolverOptions& opts = {}) {
    if (!dom.excluded_nodes().empty())
        throw parameter_error(
            "solve_a_harmonic: domain has excluded nodes; use solve_on_complement");
    Constraints cons = Constraints::none(dom.n_nodes());
    for (int i : dom.boundary_nodes()) cons.fixed_value[i] = g.values[i];
    SolveReport rep = field.is_prototype()
                          ? minimize_energy(field, dom, cons, g, opts)
                          : detail::solve_custom_field(field, dom, cons, g, opts);
    if (!rep.converged)
        throw solver_error("solve_a_harmonic: no convergence, residual " +
                           std::to_string(rep.final_kkt_residual));
    return rep;
}

inline SolveReport solve_obstacle(const ObstacleProblem& problem, const SolverOptions& opts = {},
                                  const std::optional<NodalField>& init = std::nullopt) {
    const auto& dom = *problem.domain;
    if (!problem.admissible())
        throw feasibility_error("solve_obstacle: obstacle exceeds boundary data");
    Constraints cons = Constraints::none(dom.n_nodes());
    for (int i : dom.boundary_nodes()) cons.fixed_value[i] = problem.g.values[i];
    if (problem.psi)
        for (int i = 0; i < dom.n_nodes(); ++i)
            if (!cons.is_fixed(i)) cons.lower[i] = problem.psi->values[i];
    const NodalField start = init ? *init : problem.g;
    SolveReport rep = problem.field.is_prototype()
                          ? minimize_energy(problem.field, dom, cons, start, opts)
                          : detail::solve_custom_field(problem.field, dom, cons, start, opts);
    if (!rep.converged)
        throw solver_error("solve_obstacle: no convergence, residual " +
                           std::to_string(rep.final_kkt_residual));
    return rep;
}

// Discrete solve of the equation on the complement of the excluded set: the
// triangles touching excluded nodes are dropped, the ring around the hole
// carries the natural condition, and excluded nodes leave the system.
inline SolveReport solve_on_complement(const MonotoneField& field, const DiscreteDomain& dom,
                                       const NodalField& g, const SolverOptions& opts = {}) {
    Constraints cons = Constraints::none(dom.n_nodes());
    for (int i : dom.boundary_nodes()) cons.fixed_value[i] = g.values[i];
    for (int i : dom.excluded_nodes()) {
        cons.in_system[i] = false;
        cons.fixed_value[i] = g.values[i];  // cosmetic value; no triangle sees it
    }
    SolveReport rep = minimize_energy(field, dom, cons, g, opts, /*drop_excluded=*/true);
    if (!rep.converged)
        throw solver_error("solve_on_complement: no convergence, residual " +
                           std::to_string(rep.final_kkt_residual));
    return rep;
}

struct SupersolutionCheck {
    bool ok = false;
    double worst_violation = 0.0;  // most negative atom
};

inline SupersolutionCheck is_supersolution(const NodalField& candidate,
                                           const MonotoneField& field, const DiscreteDomain& dom,
                                           double tol = 1e-8) {
    SolveReport fake;
    fake.solution = candidate;
    const auto mu = residual_measure(fake, field, dom);
    double worst = 0.0;
    for (int i = 0; i < dom.n_nodes(); ++i)
        if (!dom.is_boundary[i] && !dom.is_excluded[i]) worst = std::min(worst, mu.atoms[i]);
    return {worst >= -tol, worst};
}

enum class ComparisonResult { holds, fails, inconclusive };

// Step-5 comparison: a supersolution vtilde with min(v, vtilde) admissible
// must dominate the obstacle solution v.
inline ComparisonResult comparison_check(const SolveReport& v, const NodalField& vtilde,
                                         const ObstacleProblem& problem, double tol = 1e-10) {
    const auto& dom = *problem.domain;
    if (!is_supersolution(vtilde, problem.field, dom).ok) return ComparisonResult::inconclusive;
    if (problem.psi)
        for (int i = 0; i < dom.n_nodes(); ++i)
            if (std::min(v.solution.values[i], vtilde.values[i]) <
                problem.psi->values[i] - 1e-12)
                return ComparisonResult::inconclusive;
    for (int i : dom.boundary_nodes())
        if (vtilde.values[i] < problem.g.values[i] - 1e-12) return ComparisonResult::inconclusive;
    for (int i = 0; i < dom.n_nodes(); ++i)
        if (vtilde.values[i] < v.solution.values[i] - tol) return ComparisonResult::fails;
    return ComparisonResult::holds;
}

namespace detail {

// Damped diagonal fixed-point iteration for non-potential monotone fields.
// Convergence is monitored, not guaranteed.
inline SolveReport solve_custom_field(const MonotoneField& field, const DiscreteDomain& dom,
                                      const Constraints& cons, const NodalField& init,
                                      const SolverOptions& opts) {
    const int n = dom.n_nodes();
    std::vector<double> v = init.values;
    for (int i = 0; i < n; ++i) {
        if (cons.is_fixed(i)) v[i] = cons.fixed_value[i];
        v[i] = std::clamp(v[i], cons.lower[i], cons.upper[i]);
    }
    auto atoms_of = [&](const std::vector<double>& w) {
        SolveReport fake;
        fake.solution = NodalField(dom, w);
        return residual_measure(fake, field, dom);
    };
    auto kkt = [&](const ResidualMeasure& mu) {
        double worst = 0.0;
        for (int i = 0; i < n; ++i) {
            if (cons.is_fixed(i) || !cons.in_system[i] || dom.is_boundary[i]) continue;
            const bool at_lo = v[i] <= cons.lower[i] + opts.contact_tol;
            worst = std::max(worst, at_lo ? std::max(0.0, -mu.atoms[i]) : std::abs(mu.atoms[i]));
        }
        return worst;
    };

    // diagonal scale ~ stiffness row sums
    std::vector<double> diag(n, 1e-14);
    for (int t = 0; t < dom.n_triangles(); ++t) {
        const auto& tr = dom.triangles[t];
        const auto& gh = dom.tri_hat_grad[t];
        for (int k = 0; k < 3; ++k) diag[tr[k]] += dom.tri_area[t] * gh[k].norm2();
    }

    double tau = 0.5;
    auto mu = atoms_of(v);
    double res = kkt(mu);
    int iters = 0;
    for (int it = 0; it < 40 * opts.max_newton_iter && res > opts.kkt_tol; ++it) {
        ++iters;
        std::vector<double> trial = v;
        for (int i = 0; i < n; ++i) {
            if (cons.is_fixed(i) || !cons.in_system[i] || dom.is_boundary[i]) continue;
            trial[i] = std::clamp(trial[i] - tau * mu.atoms[i] / diag[i], cons.lower[i],
                                  cons.upper[i]);
        }
        const auto mu2 = atoms_of(trial);
        const double res2 = kkt(mu2);
        if (res2 <= res) {
            v = std::move(trial);
            mu = mu2;
            res = res2;
            tau = std::min(1.0, tau * 1.1);
        } else {
            tau *= 0.5;
            if (tau < 1e-8) break;
        }
    }

    SolveReport rep{NodalField(dom, v), iters, res, 0.0, {}, res <= opts.kkt_tol, 0.0};
    for (int i = 0; i < n; ++i)
        if (!cons.is_fixed(i) && cons.in_system[i] && !dom.is_boundary[i] &&
            v[i] <= cons.lower[i] + opts.contact_tol)
            rep.active_set.push_back(i);
    return rep;
}

}  // namespace detail

}  // namespace dplab
