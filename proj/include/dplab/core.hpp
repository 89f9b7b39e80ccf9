#pragma once

// Small shared vocabulary: 2D vectors, balls, error taxonomy, deterministic RNG.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace dplab {

inline constexpr int kDim = 2;

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2() = default;
    Vec2(double x_, double y_) : x(x_), y(y_) {}

    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2 operator/(double s) const { return {x / s, y / s}; }
    Vec2 operator-() const { return {-x, -y}; }
    Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
    Vec2& operator-=(Vec2 o) { x -= o.x; y -= o.y; return *this; }

    double dot(Vec2 o) const { return x * o.x + y * o.y; }
    double norm2() const { return x * x + y * y; }
    double norm() const { return std::sqrt(norm2()); }
};

inline Vec2 operator*(double s, Vec2 v) { return v * s; }

inline double dist(Vec2 a, Vec2 b) { return (a - b).norm(); }

// Rotate by +90 degrees; used for P1 hat gradients.
inline Vec2 perp(Vec2 v) { return {-v.y, v.x}; }

struct Ball {
    Vec2 center;
    double radius = 0.0;

    bool contains(Vec2 p) const { return dist(p, center) < radius; }
};

// Error taxonomy shared by every module. The CLI maps these onto exit codes.
struct error : std::runtime_error {
    explicit error(const std::string& msg) : std::runtime_error(msg) {}
};
struct domain_error : error { using error::error; };
struct parameter_error : error { using error::error; };
struct data_error : error { using error::error; };
struct config_error : error { using error::error; };
struct feasibility_error : error { using error::error; };
struct solver_error : error { using error::error; };

// splitmix64 + xoshiro256**; self-contained so that streams are identical
// across standard libraries and platforms.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t z = seed;
        for (auto& word : s_) {
            z += 0x9e3779b97f4a7c15ULL;
            std::uint64_t t = z;
            t = (t ^ (t >> 30)) * 0xbf58476d1ce4e5b9ULL;
            t = (t ^ (t >> 27)) * 0x94d049bb133111ebULL;
            word = t ^ (t >> 31);
        }
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform in [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform over an open ball.
    Vec2 in_ball(Ball b) {
        const double r = b.radius * std::sqrt(uniform());
        const double th = 2.0 * M_PI * uniform();
        return {b.center.x + r * std::cos(th), b.center.y + r * std::sin(th)};
    }

  private:
    static std::uint64_t rotl(std::uint64_t v, int k) { return (v << k) | (v >> (64 - k)); }
    std::uint64_t s_[4];
};

// Seed used by all ball samplers in the regularity lab.
inline constexpr std::uint64_t kBallSamplerSeed = 0xD0B1E;

}  // namespace dplab
