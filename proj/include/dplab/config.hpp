#pragma once

// Experiment configuration: sectioned key = value text. Parsing is strict
// (unknown syntax is a config error), and the resolved form is re-emitted
// canonically so a manifest alone reproduces a run.

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "dplab/candidates.hpp"
#include "dplab/double_phase.hpp"
#include "dplab/mesh.hpp"

namespace dplab {

class ExperimentConfig {
  public:
    static ExperimentConfig parse(const std::string& text) {
        ExperimentConfig cfg;
        std::istringstream in(text);
        std::string line, section = "experiment";
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            line = trim(line);
            if (line.empty()) continue;
            if (line.front() == '[') {
                if (line.back() != ']')
                    throw config_error("config line " + std::to_string(lineno) +
                                       ": unterminated section header");
                section = trim(line.substr(1, line.size() - 2));
                cfg.sections_[section];
                continue;
            }
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                throw config_error("config line " + std::to_string(lineno) +
                                   ": expected key = value");
            const std::string key = trim(line.substr(0, eq));
            const std::string value = trim(line.substr(eq + 1));
            if (key.empty()) throw config_error("config line " + std::to_string(lineno) +
                                                ": empty key");
            cfg.sections_[section][key] = value;
        }
        return cfg;
    }

    bool has(const std::string& section, const std::string& key) const {
        const auto s = sections_.find(section);
        return s != sections_.end() && s->second.count(key) > 0;
    }

    std::string get(const std::string& section, const std::string& key,
                    const std::string& fallback) const {
        const auto s = sections_.find(section);
        if (s == sections_.end()) return fallback;
        const auto k = s->second.find(key);
        return k == s->second.end() ? fallback : k->second;
    }

    std::string require(const std::string& section, const std::string& key) const {
        if (!has(section, key))
            throw config_error("config: missing [" + section + "] " + key);
        return sections_.at(section).at(key);
    }

    double get_num(const std::string& section, const std::string& key, double fallback) const {
        if (!has(section, key)) return fallback;
        return parse_num(section, key, sections_.at(section).at(key));
    }

    std::uint64_t get_u64(const std::string& section, const std::string& key,
                          std::uint64_t fallback) const {
        if (!has(section, key)) return fallback;
        return static_cast<std::uint64_t>(
            std::stoull(sections_.at(section).at(key)));
    }

    std::vector<double> get_list(const std::string& section, const std::string& key,
                                 std::vector<double> fallback) const {
        if (!has(section, key)) return fallback;
        std::istringstream in(sections_.at(section).at(key));
        std::vector<double> out;
        double v;
        while (in >> v) out.push_back(v);
        if (out.empty()) throw config_error("config: empty list for [" + section + "] " + key);
        return out;
    }

    void set(const std::string& section, const std::string& key, const std::string& value) {
        sections_[section][key] = value;
    }

    // canonical re-emission: sections and keys sorted, one key = value per line
    std::string resolved_text() const {
        std::ostringstream out;
        for (const auto& [section, kvs] : sections_) {
            out << "[" << section << "]\n";
            for (const auto& [k, v] : kvs) out << k << " = " << v << "\n";
        }
        return out.str();
    }

    const std::map<std::string, std::map<std::string, std::string>>& sections() const {
        return sections_;
    }

    // --- typed views -------------------------------------------------------

    std::string kind() const { return require("experiment", "kind"); }

    Fidelity fidelity(bool force_strict = false) const {
        if (force_strict) return Fidelity::strict;
        const std::string mode = get("experiment", "mode", "strict");
        if (mode == "strict") return Fidelity::strict;
        if (mode == "exploratory") return Fidelity::exploratory;
        throw config_error("config: mode must be strict or exploratory");
    }

    Weight weight() const {
        const std::string id = get("spec", "weight", "zero");
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
        const double alpha = get_num("spec", "alpha", 1.0);
        if (name == "zero") return Weight::zero();
        if (name == "const") return Weight::constant(par.size() > 0 ? par[0] : 1.0);
        if (name == "radial") {
            const double coef = par.size() > 0 ? par[0] : 1.0;
            Vec2 c{par.size() > 2 ? par[1] : 0.0, par.size() > 2 ? par[2] : 0.0};
            return Weight::radial(coef, alpha, c);
        }
        if (name == "ramp") return Weight::ramp(par.size() > 0 ? par[0] : 1.0, alpha);
        if (name == "smoothstep")
            return Weight::smooth_step(par.size() > 0 ? par[0] : 1.0,
                                       par.size() > 1 ? par[1] : 0.0,
                                       par.size() > 2 ? par[2] : 0.5);
        throw config_error("config: unknown weight '" + id + "'");
    }

    DoublePhaseSpec spec(bool force_strict = false) const {
        return DoublePhaseSpec(get_num("spec", "p", 2.0), get_num("spec", "q", 3.0),
                               get_num("spec", "alpha", 1.0), weight(),
                               fidelity(force_strict));
    }

    DomainSpec domain() const {
        const std::string shape = get("domain", "shape", "unit_disk");
        DomainSpec d;
        if (shape == "unit_square") d = DomainSpec::unit_square();
        else if (shape == "unit_disk") d = DomainSpec::unit_disk();
        else if (shape == "annulus")
            d = DomainSpec::annulus(get_num("domain", "r", 0.25), get_num("domain", "R", 1.0));
        else if (shape == "punctured_square" || shape == "punctured_disk") {
            d = shape == "punctured_square" ? DomainSpec::unit_square()
                                            : DomainSpec::unit_disk();
            d.excluded = excluded_set();
            if (!d.excluded || d.excluded->empty())
                throw config_error("config: punctured shape needs [domain] E");
        } else
            throw config_error("config: unknown shape '" + shape + "'");
        return d;
    }

    SetDescriptor excluded_set() const {
        if (!has("domain", "E")) return {};
        return SetDescriptor::parse(get("domain", "E", ""));
    }

    double target_h() const { return get_num("domain", "h", 1.0 / 16); }
    int refine_levels() const { return static_cast<int>(get_num("domain", "refine", 0)); }

    SolverOptions solver_options() const {
        SolverOptions o;
        o.kkt_tol = get_num("tolerances", "kkt", o.kkt_tol);
        o.contact_tol = get_num("tolerances", "contact", o.contact_tol);
        o.complementarity_tol =
            get_num("tolerances", "complementarity", o.complementarity_tol);
        o.max_newton_iter =
            static_cast<int>(get_num("tolerances", "max_iter", o.max_newton_iter));
        o.eps_schedule = get_list("tolerances", "eps_schedule", o.eps_schedule);
        for (size_t i = 1; i < o.eps_schedule.size(); ++i)
            if (!(o.eps_schedule[i] < o.eps_schedule[i - 1]))
                throw config_error("config: eps_schedule must be strictly decreasing");
        return o;
    }

    // [field] form = prototype (default) or drift:bx,by (constant drift added
    // to the p-term, the standard non-odd example; solved by the monitored
    // fixed-point path)
    MonotoneField field(bool force_strict = false) const {
        const std::string form = get("field", "form", "prototype");
        auto s = spec(force_strict);
        if (form == "prototype") return MonotoneField::prototype(std::move(s));
        if (form.rfind("drift:", 0) == 0) {
            std::string rest = form.substr(6);
            for (auto& c : rest)
                if (c == ',') c = ' ';
            std::istringstream in(rest);
            Vec2 b;
            if (!(in >> b.x >> b.y)) throw config_error("config: drift form needs bx,by");
            const double nu = std::min(1.0, s.p() - 1.0);
            const double L = 1.0 + std::max({s.p() - 1.0, s.q() - 1.0, 1.0}) + b.norm();
            return MonotoneField::custom(
                std::move(s),
                [b](const DoublePhaseSpec& sp, Vec2 x, Vec2 z) {
                    const double n = z.norm();
                    Vec2 core{0.0, 0.0};
                    if (n > 0.0)
                        core = (std::pow(n, sp.p() - 2.0) +
                                sp.a(x) * std::pow(n, sp.q() - 2.0)) *
                               z;
                    return core + b;
                },
                nu, L, form);
        }
        throw config_error("config: unknown field form '" + form + "'");
    }

  private:
    static std::string trim(const std::string& s) {
        size_t a = 0, b = s.size();
        while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
        while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
        return s.substr(a, b - a);
    }
    double parse_num(const std::string& section, const std::string& key,
                     const std::string& v) const {
        try {
            size_t pos = 0;
            const double x = std::stod(v, &pos);
            if (pos != v.size()) throw std::invalid_argument(v);
            return x;
        } catch (const std::exception&) {
            throw config_error("config: [" + section + "] " + key + " is not a number: '" + v +
                               "'");
        }
    }

    std::map<std::string, std::map<std::string, std::string>> sections_;
};

}  // namespace dplab
