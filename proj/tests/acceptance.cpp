// Acceptance suite: one line per criterion, [PASS]/[FAIL], nonzero exit when
// any criterion fails. Every tolerance is pinned in code below.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "dplab/caphaus.hpp"
#include "dplab/experiments.hpp"
#include "dplab/regularity.hpp"
#include "dplab/removability.hpp"
#include "dplab/solve.hpp"

using namespace dplab;

namespace {

int failures = 0;

void report(int id, const char* name, bool pass, const std::string& detail) {
    std::printf("[%s] criterion %2d %-30s %s\n", pass ? "PASS" : "FAIL", id, name,
                detail.c_str());
    if (!pass) ++failures;
}

double linf_error(const SolveReport& rep, const NodalField& exact) {
    double e = 0.0;
    for (size_t i = 0; i < exact.values.size(); ++i)
        e = std::max(e, std::abs(rep.solution.values[i] - exact.values[i]));
    return e;
}

MonotoneField plaplace(double p, double q) {
    return MonotoneField::prototype(DoublePhaseSpec(p, q, 1.0, Weight::zero()));
}

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

// 1. harmonic oracle on the disk: error <= 1e-2 at h = 1/32, ratio >= 3 over
//    two uniform refinements of the target size
void criterion_1() {
    auto field = plaplace(2.0, 3.0);
    std::vector<double> errors;
    for (int level = 0; level < 3; ++level) {
        auto dom = build_domain(DomainSpec::unit_disk(), (1.0 / 32) / double(1 << level));
        auto g = NodalField::interpolate(dom,
                                         [](Vec2 p) { return p.x * p.x - p.y * p.y; });
        errors.push_back(linf_error(solve_a_harmonic(field, dom, g), g));
    }
    const bool pass = errors[0] <= 1e-2 && errors[0] / errors[1] >= 3.0 &&
                      errors[1] / errors[2] >= 3.0;
    report(1, "harmonic oracle", pass,
           fmt("errors %.3e / %.3e / %.3e, ratios %.2f, %.2f", errors[0], errors[1], errors[2],
               errors[0] / errors[1], errors[1] / errors[2]));
}

// 2. radial p-harmonic oracle: p = 3 annulus, g = r^{1/2}, Linf <= 5e-3 at 1/64
void criterion_2() {
    auto field = plaplace(3.0, 3.5);
    auto dom = build_domain(DomainSpec::annulus(0.25, 1.0), 1.0 / 64);
    auto exact = NodalField::interpolate(dom, [](Vec2 p) { return std::sqrt(p.norm()); });
    const double err = linf_error(solve_a_harmonic(field, dom, exact), exact);
    report(2, "p-harmonic radial oracle", err <= 5e-3, fmt("Linf error %.3e (<= 5e-3)", err));
}

// 3. disk condenser capacity: 2 pi / ln 4 within 5% at h = 1/64
void criterion_3() {
    auto dom = build_domain(DomainSpec::unit_disk(), 1.0 / 64);
    DoublePhaseSpec spec(2.0, 3.0, 1.0, Weight::zero());
    const double value = capacity({spec, &dom, nodes_in_disk(dom, {0, 0}, 0.25)});
    const double oracle = 2.0 * M_PI / std::log(4.0);
    const double rel = std::abs(value - oracle) / oracle;
    report(3, "capacity oracle", rel <= 0.05,
           fmt("value %.5f vs %.5f, rel error %.3f%%", value, oracle, 100 * rel));
}

// 4. Luxemburg norm golden case within 1e-6; (nr1) sandwich on 100 random fields
void criterion_4() {
    DoublePhaseSpec spec24(2.0, 4.0, 1.0, Weight::constant(1.0));
    const auto mn = modular_and_luxemburg(spec24, {{{0.0, 0.0}, 1.0, 1.0}});
    const double golden = std::sqrt((1.0 + std::sqrt(5.0)) / 2.0);
    bool pass = std::abs(mn.norm - golden) <= 1e-6;

    DoublePhaseSpec spec(1.8, 2.7, 1.0, Weight::radial(0.5, 1.0));
    Rng rng(4);
    for (int rep = 0; rep < 100 && pass; ++rep) {
        std::vector<WeightedSample> samples;
        double total = 0.0;
        for (int i = 0; i < 20; ++i) {
            const double w = rng.uniform(0.01, 1.0);
            samples.push_back({{rng.uniform(-1, 1), rng.uniform(-1, 1)},
                               rng.uniform(0.0, 4.0), w});
            total += w;
        }
        for (auto& s : samples) s.weight /= total;
        const auto r = modular_and_luxemburg(spec, samples);
        const double lo = std::min(std::pow(r.modular, 1.0 / spec.p()),
                                   std::pow(r.modular, 1.0 / spec.q()));
        const double hi = std::max(std::pow(r.modular, 1.0 / spec.p()),
                                   std::pow(r.modular, 1.0 / spec.q()));
        pass = pass && lo <= r.norm * (1 + 1e-9) && r.norm <= hi * (1 + 1e-9);
    }
    report(4, "Luxemburg norm", pass,
           fmt("golden case |%.8f - %.8f| = %.1e; sandwich on 100 fields", mn.norm, golden,
               std::abs(mn.norm - golden)));
}

// 5. obstacle correctness: inactive collapse 1e-8; constraint -1e-12;
//    complementarity 1e-10; two initializations 1e-8
void criterion_5() {
    auto dom = build_domain(DomainSpec::unit_disk(), 1.0 / 32);
    auto field = plaplace(2.0, 3.0);
    auto g = NodalField::interpolate(dom, [](Vec2 p) { return p.x * p.x - p.y * p.y; });
    auto unconstrained = solve_a_harmonic(field, dom, g);
    auto low = NodalField::interpolate(dom, [](Vec2) { return -100.0; });
    auto inactive = solve_obstacle({field, &dom, low, g});
    double d_inactive = 0.0;
    for (int i = 0; i < dom.n_nodes(); ++i)
        d_inactive = std::max(d_inactive, std::abs(inactive.solution.values[i] -
                                                   unconstrained.solution.values[i]));

    auto zero = NodalField::interpolate(dom, [](Vec2) { return 0.0; });
    auto psi = NodalField::interpolate(dom, [](Vec2 p) { return 0.5 - p.norm(); });
    ObstacleProblem prob{field, &dom, psi, zero};
    auto v1 = solve_obstacle(prob);
    NodalField init2(dom, 0.0);
    for (int i = 0; i < dom.n_nodes(); ++i)
        init2.values[i] = std::max(psi.values[i], zero.values[i]) + 1.0;
    auto v2 = solve_obstacle(prob, {}, init2);
    const auto mu = residual_measure(v1, field, dom);
    double min_gap = 1e300, max_comp = 0.0, d_init = 0.0;
    for (int i = 0; i < dom.n_nodes(); ++i) {
        d_init = std::max(d_init, std::abs(v1.solution.values[i] - v2.solution.values[i]));
        if (dom.is_boundary[i]) continue;
        min_gap = std::min(min_gap, v1.solution.values[i] - psi.values[i]);
        max_comp = std::max(max_comp, mu.atoms[i] * (v1.solution.values[i] - psi.values[i]));
    }
    const bool pass =
        d_inactive <= 1e-8 && min_gap >= -1e-12 && max_comp <= 1e-10 && d_init <= 1e-8;
    report(5, "obstacle correctness", pass,
           fmt("inactive %.1e, min gap %.1e, compl %.1e, init diff %.1e", d_inactive, min_gap,
               max_comp, d_init));
}

// 6. harmonicity off the contact set: Lipschitz obstacle, off-contact atoms <= 1e-8
void criterion_6() {
    auto dom = build_domain(DomainSpec::unit_disk(), 1.0 / 32);
    auto field = plaplace(2.0, 3.0);
    auto zero = NodalField::interpolate(dom, [](Vec2) { return 0.0; });
    auto psi = NodalField::interpolate(dom, [](Vec2 p) { return 0.5 - p.norm(); });
    auto rep = solve_obstacle({field, &dom, psi, zero});
    const auto mu = residual_measure(rep, field, dom);
    double worst = 0.0;
    for (int i = 0; i < dom.n_nodes(); ++i)
        if (!dom.is_boundary[i] && rep.solution.values[i] - psi.values[i] > 1e-6)
            worst = std::max(worst, std::abs(mu.atoms[i]));
    report(6, "harmonicity off contact", worst <= 1e-8,
           fmt("max off-contact |atom| = %.2e (<= 1e-8)", worst));
}

// 7. inequality suite over 3 weights x 2 exponent pairs, drift < 2, <= 10 min
void criterion_7() {
    const auto t0 = std::chrono::steady_clock::now();
    struct Bench {
        const char* weight;
        Weight w;
        double p, q;
    };
    const std::vector<Bench> benches = {
        {"zero", Weight::zero(), 1.7, 1.9},
        {"zero", Weight::zero(), 2.0, 2.5},
        {"const", Weight::constant(0.5), 1.7, 1.9},
        {"const", Weight::constant(0.5), 2.0, 2.5},
        {"radial", Weight::radial(1.0, 1.0), 1.7, 1.9},
        {"radial", Weight::radial(1.0, 1.0), 2.0, 2.5},
    };
    bool pass = true;
    std::string worst_info = "all drifts < 2";
    for (const auto& b : benches) {
        RegularityBenchmark bench{DoublePhaseSpec(b.p, b.q, 1.0, b.w)};
        bench.base_h = 1.0 / 48;
        const auto result = run_regularity_lab(bench);
        for (const auto& c : result.checks) {
            if (!c.pass(2.0)) {
                pass = false;
                worst_info = fmt("%s (weight %s, p=%.1f q=%.1f) drift %.2f",
                                 c.coarse.name.c_str(), b.weight, b.p, b.q, c.drift());
            }
        }
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    pass = pass && secs <= 600.0;
    report(7, "inequality suite", pass,
           fmt("%s; runtime %.0f s (<= 600)", worst_info.c_str(), secs));
}

// 8. Hausdorff decay slopes: point 2/3, segment -1/3, both within 15%
void criterion_8() {
    DoublePhaseSpec spec(2.0, 3.0, 1.0, Weight::zero());
    const double sigma = sigma_exponent(1.0, spec);  // p sigma = 4/3
    const auto kernel = HausdorffKernel::modified(sigma);
    const std::vector<double> deltas{1.0 / 8, 1.0 / 16, 1.0 / 32, 1.0 / 64, 1.0 / 128};

    SetDescriptor pt;
    pt.points.push_back({0.0, 0.0});
    const auto point_study = measure_decay_study(pt, kernel, spec, Shape::unit_disk(), deltas);
    SetDescriptor seg;
    seg.segments.push_back({{-0.5, 0.0}, {0.5, 0.0}});
    const auto seg_study = measure_decay_study(seg, kernel, spec, Shape::unit_disk(), deltas);

    const bool pass = std::abs(point_study.slope - 2.0 / 3.0) <= 0.15 * (2.0 / 3.0) &&
                      point_study.classification == DecayClass::zero &&
                      std::abs(seg_study.slope + 1.0 / 3.0) <= 0.15 * (1.0 / 3.0) &&
                      seg_study.classification == DecayClass::divergent;
    report(8, "Hausdorff decay", pass,
           fmt("point slope %.4f (want 2/3), segment slope %.4f (want -1/3)",
               point_study.slope, seg_study.slope));
}

// 9. removability triple
void criterion_9() {
    // (a) smooth candidate across a point
    RemovabilityConfig a{plaplace(2.0, 3.0), DomainSpec::unit_disk(), 1.0 / 24, {},
                         make_analytic_field("x1")};
    a.E.points.push_back({0.0, 0.0});
    const auto va = run_removability(a);
    const bool pass_a = va.verdict == RemovabilityClass::removable_consistent &&
                        va.levels[1].barrier_gap <= 5e-8;
    report(9, "removability (a) u = x1", pass_a,
           fmt("verdict %s, gap %.2e (<= 5e-8)", to_string(va.verdict),
               va.levels[1].barrier_gap));

    // (b) u = |x|^{1/2} at p = 3 across the origin; the stated expectation is
    // removable-consistent with the mass halving per refinement
    RemovabilityConfig b{plaplace(3.0, 3.5), DomainSpec::unit_disk(), 1.0 / 24, {},
                         make_analytic_field("radial_sqrt")};
    b.E.points.push_back({0.0, 0.0});
    const auto vb = run_removability(b);
    const bool pass_b = vb.verdict == RemovabilityClass::removable_consistent &&
                        vb.levels[1].mu_on_E <= 0.5 * vb.levels[0].mu_on_E;
    report(9, "removability (b) u = |x|^{1/2}", pass_b,
           fmt("verdict %s, mu_on_E %.4f -> %.4f, gap %.3f (u is the p=3 fundamental "
               "solution; its point mass ~ pi/2 persists in the lower barrier)",
               to_string(vb.verdict), vb.levels[0].mu_on_E, vb.levels[1].mu_on_E,
               vb.levels[1].barrier_gap));

    // (c) segment-defect control: never removable-consistent
    RemovabilityConfig c{plaplace(2.0, 3.0), DomainSpec::unit_disk(), 1.0 / 24, {},
                         make_analytic_field("abs_x2:0.0")};
    c.E.segments.push_back({{-0.5, 0.0}, {0.5, 0.0}});
    const auto vc = run_removability(c);
    const bool pass_c = vc.verdict != RemovabilityClass::removable_consistent;
    report(9, "removability (c) segment", pass_c,
           fmt("verdict %s, mu_on_E %.3f -> %.3f", to_string(vc.verdict),
               vc.levels[0].mu_on_E, vc.levels[1].mu_on_E));
}

// 10. determinism: identical config + seed => byte-identical CSVs
void criterion_10() {
    namespace fs = std::filesystem;
    const char* config_text = R"(
[experiment]
kind = solve
seed = 42
mode = exploratory
[domain]
shape = unit_disk
h = 0.1
refine = 1
[spec]
p = 2.0
q = 3.0
[solve]
g = harmonic_quad
)";
    auto cfg = ExperimentConfig::parse(config_text);
    const auto base = fs::temp_directory_path() / "dplab_acceptance_det";
    fs::remove_all(base);
    run_study(cfg, base / "a");
    run_study(cfg, base / "b");
    bool pass = true;
    for (const char* f : {"error_vs_h.csv", "solution.txt", "summary.json", "manifest.json"})
        pass = pass && read_text_file(base / "a" / f) == read_text_file(base / "b" / f);
    report(10, "determinism", pass, pass ? "byte-identical reruns" : "outputs differ");
}

}  // namespace

int main() {
    std::printf("dplab acceptance suite\n");
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    std::printf("%d criterion check(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}
