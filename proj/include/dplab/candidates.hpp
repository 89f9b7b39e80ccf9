#pragma once

// Registry of audited analytic fields used as boundary data, obstacles, and
// removability candidates. Every entry carries exact Holder data where the
// removability theory needs it, and a tag saying for which equation it is an
// exact solution (for convergence studies).

#include <cmath>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "dplab/core.hpp"

namespace dplab {

struct HolderCertificate {
    double beta0 = 1.0;  // exponent
    double C = 1.0;      // |u(x)-u(y)| <= C |x-y|^{beta0}
};

enum class ExactnessTag {
    none,
    affine,          // solution whenever the weight is constant in space
    harmonic_p2_a0,  // p = 2, a = 0
    radial_p3_a0,    // p = 3, a = 0, away from the origin
};

struct AnalyticField {
    std::string id;
    std::function<double(Vec2)> fn;
    std::optional<HolderCertificate> holder;  // empty: not Holder-certified
    ExactnessTag exact = ExactnessTag::none;

    double operator()(Vec2 x) const { return fn(x); }
};

// id syntax: name or name:p1,p2,...
inline AnalyticField make_analytic_field(const std::string& id) {
    std::string name = id;
    std::vector<double> par;
    if (const auto colon = id.find(':'); colon != std::string::npos) {
        name = id.substr(0, colon);
        std::string rest = id.substr(colon + 1);
        for (auto& c : rest)
            if (c == ',') c = ' ';
        std::istringstream in(rest);
        double v;
        while (in >> v) par.push_back(v);
    }
    auto want = [&](size_t n) {
        if (par.size() != n)
            throw config_error("analytic field '" + name + "': expected " + std::to_string(n) +
                               " parameters");
    };

    if (name == "zero") {
        return {id, [](Vec2) { return 0.0; }, HolderCertificate{1.0, 0.0}, ExactnessTag::affine};
    }
    if (name == "const") {
        want(1);
        const double c = par[0];
        return {id, [c](Vec2) { return c; }, HolderCertificate{1.0, 0.0}, ExactnessTag::affine};
    }
    if (name == "x1") {
        return {id, [](Vec2 p) { return p.x; }, HolderCertificate{1.0, 1.0},
                ExactnessTag::affine};
    }
    if (name == "xy") {
        return {id, [](Vec2 p) { return p.x * p.y; }, HolderCertificate{1.0, 2.0},
                ExactnessTag::harmonic_p2_a0};
    }
    if (name == "harmonic_quad") {
        // x1^2 - x2^2; on the unit disk the gradient stays below 2
        return {id, [](Vec2 p) { return p.x * p.x - p.y * p.y; }, HolderCertificate{1.0, 2.83},
                ExactnessTag::harmonic_p2_a0};
    }
    if (name == "radial_sqrt") {
        // |x|^{1/2}: globally 1/2-Holder with constant 1
        return {id, [](Vec2 p) { return std::sqrt(p.norm()); }, HolderCertificate{0.5, 1.0},
                ExactnessTag::radial_p3_a0};
    }
    if (name == "abs_x2") {
        const double c = par.empty() ? 0.0 : par[0];
        return {id, [c](Vec2 p) { return std::abs(p.y - c); }, HolderCertificate{1.0, 1.0},
                ExactnessTag::none};
    }
    if (name == "log_singular") {
        // ln(1/|x|), clamped; deliberately carries no Holder certificate
        return {id,
                [](Vec2 p) { return std::log(1.0 / std::max(p.norm(), 1e-12)); },
                std::nullopt, ExactnessTag::none};
    }
    if (name == "cone") {
        want(2);
        const double c0 = par[0], c1 = par[1];
        return {id, [c0, c1](Vec2 p) { return c0 - c1 * p.norm(); },
                HolderCertificate{1.0, c1}, ExactnessTag::none};
    }
    if (name == "holder_cusp") {
        want(3);
        const double A = par[0], B = par[1], beta = par[2];
        if (!(beta > 0.0 && beta <= 1.0))
            throw config_error("holder_cusp: exponent must lie in (0,1]");
        return {id, [A, B, beta](Vec2 p) { return A - B * std::pow(p.norm(), beta); },
                HolderCertificate{beta, B}, ExactnessTag::none};
    }
    if (name == "paraboloid") {
        want(2);
        const double c0 = par[0], c1 = par[1];
        return {id, [c0, c1](Vec2 p) { return c0 - c1 * p.norm2(); },
                HolderCertificate{1.0, 2.0 * c1 * 2.0}, ExactnessTag::none};
    }
    throw config_error("unknown analytic field '" + name + "'");
}

}  // namespace dplab
