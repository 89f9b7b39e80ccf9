#pragma once

// Double phase integrand H(x,z) = |z|^p + a(x)|z|^q and everything defined
// pointwise from it: the sigma-modified integrand, Fenchel conjugate,
// modulars and Luxemburg norms, the monotone vector field A(x,z) with its
// V_t monotonicity quantities, and the degenerate/nondegenerate phase
// classification of balls.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "dplab/core.hpp"

namespace dplab {

enum class Fidelity { strict, exploratory };

// Weight field a(.) from a small registry of closed forms, each carrying its
// exact Holder data. Exactness matters: the degenerate-phase test compares
// a_i(B_rho) against 4 [a]_{0,alpha} rho^alpha, so a guessed seminorm would
// make the dichotomy meaningless.
class Weight {
  public:
    enum class Kind { zero, constant, radial, ramp, smooth_step, grid };

    static Weight zero() { return Weight(Kind::zero, 1.0, 0.0); }

    static Weight constant(double value) {
        if (value < 0.0) throw parameter_error("weight: constant must be nonnegative");
        Weight w(Kind::constant, 1.0, 0.0);
        w.coef_ = value;
        return w;
    }

    // coef * |x - center|^alpha ; [a]_{0,alpha} = coef.
    static Weight radial(double coef, double alpha, Vec2 center = {0.0, 0.0}) {
        check_coef_alpha(coef, alpha);
        Weight w(Kind::radial, alpha, coef);
        w.coef_ = coef;
        w.center_ = center;
        return w;
    }

    // coef * max(0, x1)^alpha ; [a]_{0,alpha} = coef.
    static Weight ramp(double coef, double alpha) {
        check_coef_alpha(coef, alpha);
        Weight w(Kind::ramp, alpha, coef);
        w.coef_ = coef;
        return w;
    }

    // coef * S((x1 - edge)/width) with S the cubic smoothstep; Lipschitz with
    // constant coef * 3/(2 width), so alpha = 1 exactly.
    static Weight smooth_step(double coef, double edge, double width) {
        if (coef < 0.0 || width <= 0.0) throw parameter_error("weight: bad smooth_step parameters");
        Weight w(Kind::smooth_step, 1.0, coef * 1.5 / width);
        w.coef_ = coef;
        w.edge_ = edge;
        w.width_ = width;
        return w;
    }

    // Bilinear interpolation of nodal samples on a uniform nx x ny grid over
    // [x0,x1] x [y0,y1]; alpha = 1 with the seminorm certified from per-cell
    // gradient bounds. Evaluation outside the box is a domain error.
    static Weight grid(std::vector<double> samples, int nx, int ny,
                       Vec2 lo, Vec2 hi) {
        if (nx < 2 || ny < 2 || static_cast<int>(samples.size()) != nx * ny)
            throw parameter_error("weight: grid dimensions do not match samples");
        if (hi.x <= lo.x || hi.y <= lo.y) throw parameter_error("weight: empty grid box");
        double seminorm = 0.0;
        const double hx = (hi.x - lo.x) / (nx - 1);
        const double hy = (hi.y - lo.y) / (ny - 1);
        for (int j = 0; j + 1 < ny; ++j)
            for (int i = 0; i + 1 < nx; ++i) {
                const double c00 = samples[j * nx + i], c10 = samples[j * nx + i + 1];
                const double c01 = samples[(j + 1) * nx + i], c11 = samples[(j + 1) * nx + i + 1];
                if (c00 < 0 || c10 < 0 || c01 < 0 || c11 < 0)
                    throw data_error("weight: grid samples must be nonnegative");
                const double gx = std::max(std::abs(c10 - c00), std::abs(c11 - c01)) / hx;
                const double gy = std::max(std::abs(c01 - c00), std::abs(c11 - c10)) / hy;
                seminorm = std::max(seminorm, std::hypot(gx, gy));
            }
        Weight w(Kind::grid, 1.0, seminorm);
        w.grid_ = std::make_shared<GridData>(GridData{std::move(samples), nx, ny, lo, hi});
        return w;
    }

    double operator()(Vec2 x) const {
        switch (kind_) {
            case Kind::zero: return 0.0;
            case Kind::constant: return coef_;
            case Kind::radial: return coef_ * std::pow(dist(x, center_), alpha_);
            case Kind::ramp: return coef_ * std::pow(std::max(0.0, x.x), alpha_);
            case Kind::smooth_step: {
                const double t = std::clamp((x.x - edge_) / width_, 0.0, 1.0);
                return coef_ * t * t * (3.0 - 2.0 * t);
            }
            case Kind::grid: return eval_grid(x);
        }
        return 0.0;
    }

    Kind kind() const { return kind_; }
    double alpha() const { return alpha_; }
    double seminorm() const { return seminorm_; }

    bool in_domain(Vec2 x) const {
        if (kind_ != Kind::grid) return true;
        return x.x >= grid_->lo.x - 1e-14 && x.x <= grid_->hi.x + 1e-14 &&
               x.y >= grid_->lo.y - 1e-14 && x.y <= grid_->hi.y + 1e-14;
    }

    // inf/sup over a closed ball: exact for the closed forms, 64x64 polar
    // sampling (plus the center) for grids.
    double inf_on(Ball b) const {
        switch (kind_) {
            case Kind::zero: return 0.0;
            case Kind::constant: return coef_;
            case Kind::radial:
                return coef_ * std::pow(std::max(0.0, dist(b.center, center_) - b.radius), alpha_);
            case Kind::ramp:
                return coef_ * std::pow(std::max(0.0, b.center.x - b.radius), alpha_);
            case Kind::smooth_step:
                return (*this)({b.center.x - b.radius, b.center.y});
            case Kind::grid: return sample_extremum(b, false);
        }
        return 0.0;
    }

    double sup_on(Ball b) const {
        switch (kind_) {
            case Kind::zero: return 0.0;
            case Kind::constant: return coef_;
            case Kind::radial:
                return coef_ * std::pow(dist(b.center, center_) + b.radius, alpha_);
            case Kind::ramp:
                return coef_ * std::pow(std::max(0.0, b.center.x + b.radius), alpha_);
            case Kind::smooth_step:
                return (*this)({b.center.x + b.radius, b.center.y});
            case Kind::grid: return sample_extremum(b, true);
        }
        return 0.0;
    }

  private:
    struct GridData {
        std::vector<double> samples;
        int nx, ny;
        Vec2 lo, hi;
    };

    Weight(Kind k, double alpha, double seminorm)
        : kind_(k), alpha_(alpha), seminorm_(seminorm) {}

    static void check_coef_alpha(double coef, double alpha) {
        if (coef < 0.0) throw parameter_error("weight: coefficient must be nonnegative");
        if (alpha <= 0.0 || alpha > 1.0) throw parameter_error("weight: alpha must lie in (0,1]");
    }

    double eval_grid(Vec2 x) const {
        if (!in_domain(x)) throw domain_error("weight: point outside grid support");
        const auto& g = *grid_;
        const double sx = (x.x - g.lo.x) / (g.hi.x - g.lo.x) * (g.nx - 1);
        const double sy = (x.y - g.lo.y) / (g.hi.y - g.lo.y) * (g.ny - 1);
        const int i = std::min(g.nx - 2, std::max(0, static_cast<int>(sx)));
        const int j = std::min(g.ny - 2, std::max(0, static_cast<int>(sy)));
        const double fx = std::clamp(sx - i, 0.0, 1.0);
        const double fy = std::clamp(sy - j, 0.0, 1.0);
        const double c00 = g.samples[j * g.nx + i], c10 = g.samples[j * g.nx + i + 1];
        const double c01 = g.samples[(j + 1) * g.nx + i], c11 = g.samples[(j + 1) * g.nx + i + 1];
        return (1 - fy) * ((1 - fx) * c00 + fx * c10) + fy * ((1 - fx) * c01 + fx * c11);
    }

    double sample_extremum(Ball b, bool want_sup) const {
        double best = (*this)(b.center);
        const int nr = 64, nth = 64;
        for (int ir = 1; ir <= nr; ++ir) {
            const double r = b.radius * ir / nr;
            for (int it = 0; it < nth; ++it) {
                const double th = 2.0 * M_PI * it / nth;
                const Vec2 x{b.center.x + r * std::cos(th), b.center.y + r * std::sin(th)};
                if (!in_domain(x)) continue;
                const double v = (*this)(x);
                best = want_sup ? std::max(best, v) : std::min(best, v);
            }
        }
        return best;
    }

    Kind kind_;
    double alpha_;
    double seminorm_;
    double coef_ = 0.0;
    Vec2 center_{0.0, 0.0};
    double edge_ = 0.0;
    double width_ = 1.0;
    std::shared_ptr<const GridData> grid_;
};

// The integrand data (p, q, alpha, [a]_{0,alpha}, a(.)). Immutable. In strict
// mode the constructor enforces 1 < p < q < 2 and q/p <= 1 + alpha/2 (n = 2);
// exploratory mode only requires 1 < p < q, which the discrete solver
// tolerates even though the balance condition fails.
class DoublePhaseSpec {
  public:
    DoublePhaseSpec(double p, double q, double alpha, Weight weight,
                    Fidelity mode = Fidelity::exploratory)
        : p_(p), q_(q), alpha_(alpha), weight_(std::move(weight)), mode_(mode) {
        if (!(p > 1.0)) throw parameter_error("spec: requires p > 1");
        if (!(q > p)) throw parameter_error("spec: requires q > p");
        if (alpha <= 0.0 || alpha > 1.0) throw parameter_error("spec: alpha must lie in (0,1]");
        if (weight_.alpha() < alpha - 1e-12)
            throw parameter_error("spec: weight is not alpha-Holder for the requested alpha");
        if (mode == Fidelity::strict) {
            if (!(q < 2.0))
                throw config_error("condition (pq) violated: strict mode requires q < n = 2");
            if (q / p > 1.0 + alpha / 2.0 + 1e-12)
                throw config_error("condition (pq) violated: q/p exceeds 1 + alpha/n");
        }
    }

    double p() const { return p_; }
    double q() const { return q_; }
    double alpha() const { return alpha_; }
    double holder_seminorm() const { return weight_.seminorm(); }
    const Weight& weight() const { return weight_; }
    Fidelity mode() const { return mode_; }

    double a(Vec2 x) const {
        if (!weight_.in_domain(x)) throw domain_error("spec: point outside weight domain");
        return weight_(x);
    }

  private:
    double p_, q_, alpha_;
    Weight weight_;
    Fidelity mode_;
};

inline double eval_H(const DoublePhaseSpec& spec, Vec2 x, double t) {
    if (t < 0.0) throw parameter_error("eval_H: modulus must be nonnegative");
    if (t == 0.0) {
        spec.a(x);  // still validates the point
        return 0.0;
    }
    return std::pow(t, spec.p()) + spec.a(x) * std::pow(t, spec.q());
}

inline double eval_H(const DoublePhaseSpec& spec, Vec2 x, Vec2 z) {
    return eval_H(spec, x, z.norm());
}

// H_sigma(x,t) = t^{p sigma} + a(x)^sigma t^{q sigma}, 1/p < sigma <= 1.
inline double eval_H_sigma(const DoublePhaseSpec& spec, double sigma, Vec2 x, double t) {
    if (!(sigma >= 1.0 / spec.p() - 1e-12 && sigma <= 1.0))
        throw parameter_error("eval_H_sigma: sigma must lie in (1/p, 1]");
    if (t < 0.0) throw parameter_error("eval_H_sigma: modulus must be nonnegative");
    if (t == 0.0) {
        spec.a(x);
        return 0.0;
    }
    return std::pow(t, spec.p() * sigma) + std::pow(spec.a(x), sigma) * std::pow(t, spec.q() * sigma);
}

inline double eval_H_sigma(const DoublePhaseSpec& spec, double sigma, Vec2 x, Vec2 z) {
    return eval_H_sigma(spec, sigma, x, z.norm());
}

// sigma = 1 - beta0 (p-1)/q. Since q > p and beta0 <= 1 this always lands in
// (1/p, 1), so H_sigma stays inside the admissible family.
inline double sigma_exponent(double beta0, const DoublePhaseSpec& spec) {
    if (!(beta0 > 0.0 && beta0 <= 1.0))
        throw parameter_error("sigma_exponent: beta0 must lie in (0,1]");
    return 1.0 - beta0 * (spec.p() - 1.0) / spec.q();
}

// Fenchel conjugate H*(x,t) = sup_{s>=0} { s t - H(x,s) } by golden-section
// search: the supremand is concave in s and the growth of H gives the
// bracket s <= 1 + t^{1/(p-1)}.
inline double fenchel_conjugate(const DoublePhaseSpec& spec, Vec2 x, double t) {
    if (t < 0.0) throw parameter_error("fenchel_conjugate: t must be nonnegative");
    if (t == 0.0) return 0.0;
    const double ax = spec.a(x);
    const double p = spec.p(), q = spec.q();
    auto phi = [&](double s) {
        return s * t - (std::pow(s, p) + ax * std::pow(s, q));
    };
    double lo = 0.0;
    double hi = 1.0 + std::pow(t, 1.0 / (p - 1.0));
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = hi - gr * (hi - lo), d = lo + gr * (hi - lo);
    double fc = phi(c), fd = phi(d);
    const double tol = 1e-10 * std::max(1.0, hi);
    while (hi - lo > tol) {
        if (fc > fd) {
            hi = d; d = c; fd = fc;
            c = hi - gr * (hi - lo); fc = phi(c);
        } else {
            lo = c; c = d; fc = fd;
            d = lo + gr * (hi - lo); fd = phi(d);
        }
    }
    return std::max(0.0, phi(0.5 * (lo + hi)));
}

struct WeightedSample {
    Vec2 x;
    double value = 0.0;   // |w| at x
    double weight = 0.0;  // quadrature weight
};

struct ModularNorm {
    double modular = 0.0;
    double norm = 0.0;
};

// Modular rho_H(w) by quadrature and the Luxemburg norm by bisection on
// lambda in  sum_i w_i H(x_i, v_i/lambda) = 1. The modular is strictly
// decreasing in lambda, and the (nr1) sandwich brackets the root.
inline ModularNorm modular_and_luxemburg(const DoublePhaseSpec& spec,
                                         const std::vector<WeightedSample>& samples) {
    double modular = 0.0;
    double vmax = 0.0;
    for (const auto& s : samples) {
        if (!std::isfinite(s.value) || !std::isfinite(s.weight))
            throw data_error("modular: non-finite sample");
        if (s.weight <= 0.0) throw data_error("modular: sample weights must be positive");
        if (s.value < 0.0) throw data_error("modular: sample moduli must be nonnegative");
        modular += s.weight * eval_H(spec, s.x, s.value);
        vmax = std::max(vmax, s.value);
    }
    if (vmax == 0.0) return {0.0, 0.0};

    auto g = [&](double lambda) {
        double acc = 0.0;
        for (const auto& s : samples) acc += s.weight * eval_H(spec, s.x, s.value / lambda);
        return acc;
    };

    const double lo_guess = std::min(std::pow(modular, 1.0 / spec.p()),
                                     std::pow(modular, 1.0 / spec.q()));
    const double hi_guess = std::max(std::pow(modular, 1.0 / spec.p()),
                                     std::pow(modular, 1.0 / spec.q()));
    double lo = 0.5 * lo_guess, hi = 2.0 * hi_guess;
    while (g(lo) < 1.0) lo *= 0.5;
    while (g(hi) > 1.0) hi *= 2.0;
    for (int it = 0; it < 200 && (hi - lo) > 1e-10 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (g(mid) > 1.0 ? lo : hi) = mid;
    }
    return {modular, 0.5 * (lo + hi)};
}

// Conjugate-side modular and Luxemburg norm: same bisection with H replaced
// by H*. The norm-modular sandwich here uses the exponents q/(q+1), p/(p+1).
inline ModularNorm conjugate_modular_and_luxemburg(const DoublePhaseSpec& spec,
                                                   const std::vector<WeightedSample>& samples) {
    double modular = 0.0;
    double vmax = 0.0;
    for (const auto& s : samples) {
        if (!std::isfinite(s.value) || !std::isfinite(s.weight))
            throw data_error("conjugate modular: non-finite sample");
        if (s.weight <= 0.0) throw data_error("conjugate modular: weights must be positive");
        modular += s.weight * fenchel_conjugate(spec, s.x, s.value);
        vmax = std::max(vmax, s.value);
    }
    if (vmax == 0.0) return {0.0, 0.0};
    auto g = [&](double lambda) {
        double acc = 0.0;
        for (const auto& s : samples)
            acc += s.weight * fenchel_conjugate(spec, s.x, s.value / lambda);
        return acc;
    };
    double lo = 1e-8, hi = 1.0;
    while (g(lo) < 1.0) lo *= 0.5;
    while (g(hi) > 1.0) hi *= 2.0;
    for (int it = 0; it < 200 && (hi - lo) > 1e-10 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (g(mid) > 1.0 ? lo : hi) = mid;
    }
    return {modular, 0.5 * (lo + hi)};
}

// V_t(z) = |z|^{(t-2)/2} z.
inline Vec2 field_V(double t, Vec2 z) {
    const double n = z.norm();
    if (n == 0.0) return {0.0, 0.0};
    return std::pow(n, (t - 2.0) / 2.0) * z;
}

// Monotone vector field with (A)-type growth. The prototype is the
// Euler-Lagrange field of H scaled by 1/p, 1/q:
//   A(x,z) = |z|^{p-2} z + a(x) |z|^{q-2} z,
// with nu = min(1, p-1) and L = 1 + max(p-1, q-1, 1).
class MonotoneField {
  public:
    using EvalFn = std::function<Vec2(const DoublePhaseSpec&, Vec2, Vec2)>;

    static MonotoneField prototype(DoublePhaseSpec spec) {
        MonotoneField f(std::move(spec));
        f.nu_ = std::min(1.0, f.spec_.p() - 1.0);
        f.L_ = 1.0 + std::max({f.spec_.p() - 1.0, f.spec_.q() - 1.0, 1.0});
        return f;
    }

    static MonotoneField custom(DoublePhaseSpec spec, EvalFn eval, double nu, double L,
                                std::string label = "custom") {
        if (!(nu > 0.0) || L < nu) throw parameter_error("field: requires 0 < nu <= L");
        MonotoneField f(std::move(spec));
        f.eval_ = std::move(eval);
        f.nu_ = nu;
        f.L_ = L;
        f.label_ = std::move(label);
        return f;
    }

    Vec2 operator()(Vec2 x, Vec2 z) const {
        if (eval_) return eval_(spec_, x, z);
        const double n = z.norm();
        if (n == 0.0) return {0.0, 0.0};
        return (std::pow(n, spec_.p() - 2.0) + spec_.a(x) * std::pow(n, spec_.q() - 2.0)) * z;
    }

    bool is_prototype() const { return !eval_; }
    const DoublePhaseSpec& spec() const { return spec_; }
    double nu() const { return nu_; }
    double L() const { return L_; }
    const std::string& label() const { return label_; }

  private:
    explicit MonotoneField(DoublePhaseSpec spec) : spec_(std::move(spec)) {}

    DoublePhaseSpec spec_;
    EvalFn eval_;
    double nu_ = 1.0;
    double L_ = 1.0;
    std::string label_ = "prototype";
};

// z -> -A(x,-z). Satisfies (A) with the same constants; equals A itself when
// A is odd in z, so the prototype stays on the fast solver path.
inline MonotoneField reflected_field(const MonotoneField& field) {
    if (field.is_prototype()) return field;
    auto inner = field;
    return MonotoneField::custom(
        field.spec(),
        [inner](const DoublePhaseSpec&, Vec2 x, Vec2 z) { return -inner(x, -z); },
        field.nu(), field.L(), "reflected(" + field.label() + ")");
}

struct MonotonicityGap {
    double V = 0.0;        // |V_p(z1)-V_p(z2)|^2 + a(x) |V_q(z1)-V_q(z2)|^2
    double pairing = 0.0;  // <A(x,z1)-A(x,z2), z1-z2>
};

inline MonotonicityGap monotonicity_gap(const MonotoneField& field, Vec2 x, Vec2 z1, Vec2 z2) {
    const auto& spec = field.spec();
    const Vec2 dp = field_V(spec.p(), z1) - field_V(spec.p(), z2);
    const Vec2 dq = field_V(spec.q(), z1) - field_V(spec.q(), z2);
    MonotonicityGap g;
    g.V = dp.norm2() + spec.a(x) * dq.norm2();
    g.pairing = (field(x, z1) - field(x, z2)).dot(z1 - z2);
    return g;
}

struct PhaseClass {
    Ball ball;
    double a_inf = 0.0;
    double a_sup = 0.0;
    bool degenerate = true;  // a_i(B_rho) <= 4 [a]_{0,alpha} rho^alpha
};

inline PhaseClass classify_phase(const DoublePhaseSpec& spec, Ball ball) {
    if (!(ball.radius > 0.0) || ball.radius > 1.0)
        throw parameter_error("classify_phase: requires 0 < rho <= 1");
    // Ball must stay inside the weight's domain of definition.
    for (int k = 0; k < 8; ++k) {
        const double th = 2.0 * M_PI * k / 8;
        const Vec2 x{ball.center.x + ball.radius * std::cos(th),
                     ball.center.y + ball.radius * std::sin(th)};
        if (!spec.weight().in_domain(x)) throw domain_error("classify_phase: ball exits domain");
    }
    PhaseClass pc;
    pc.ball = ball;
    pc.a_inf = spec.weight().inf_on(ball);
    pc.a_sup = spec.weight().sup_on(ball);
    pc.degenerate =
        pc.a_inf <= 4.0 * spec.holder_seminorm() * std::pow(ball.radius, spec.alpha());
    return pc;
}

}  // namespace dplab
