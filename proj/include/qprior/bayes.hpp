#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>

#include "qprior/families.hpp"
#include "qprior/priors.hpp"
#include "qprior/quadrature.hpp"

namespace qprior {

/// Per-axis spin measurement counts plus a formal exponent applied to the
/// whole likelihood (1 = standard, 1/2 = the square-root device of the
/// comparative noninformativity test).
///
/// Textual form: "x:u,d y:u,d z:u,d pow:P", axes optional, e.g.
/// "x:1,1 y:1,1 z:1,1 pow:1" or "z:1,1 pow:0.5".
struct MeasurementSpec {
    int up[3] = {0, 0, 0};    // x, y, z
    int down[3] = {0, 0, 0};
    double power = 1.0;

    static MeasurementSpec parse(const std::string& text);
    std::string format() const;

    /// One up and one down along each axis: L = (1-x^2)(1-y^2)(1-z^2)/64.
    static MeasurementSpec three_pairs(double power = 1.0) {
        MeasurementSpec s;
        s.up[0] = s.up[1] = s.up[2] = 1;
        s.down[0] = s.down[1] = s.down[2] = 1;
        s.power = power;
        return s;
    }

    /// One up and one down along z only: L = (1-z^2)/4.
    static MeasurementSpec z_pair(double power = 1.0) {
        MeasurementSpec s;
        s.up[2] = s.down[2] = 1;
        s.power = power;
        return s;
    }

    static MeasurementSpec z_up(int count, double power = 1.0) {
        MeasurementSpec s;
        s.up[2] = count;
        s.power = power;
        return s;
    }
};

inline void validate(const MeasurementSpec& s) {
    for (int a = 0; a < 3; ++a)
        if (s.up[a] < 0 || s.down[a] < 0) throw std::domain_error("MeasurementSpec: counts must be >= 0");
    if (!(s.power > 0.0)) throw std::domain_error("MeasurementSpec: power must be > 0");
}

inline MeasurementSpec MeasurementSpec::parse(const std::string& text) {
    MeasurementSpec s;
    std::istringstream in(text);
    std::string tok;
    while (in >> tok) {
        const auto colon = tok.find(':');
        if (colon == std::string::npos) throw std::invalid_argument("MeasurementSpec: bad token '" + tok + "'");
        const std::string key = tok.substr(0, colon);
        const std::string val = tok.substr(colon + 1);
        if (key == "pow") {
            s.power = std::stod(val);
        } else if (key == "x" || key == "y" || key == "z") {
            const int axis = key == "x" ? 0 : key == "y" ? 1 : 2;
            const auto comma = val.find(',');
            if (comma == std::string::npos)
                throw std::invalid_argument("MeasurementSpec: expected u,d in '" + tok + "'");
            s.up[axis] = std::stoi(val.substr(0, comma));
            s.down[axis] = std::stoi(val.substr(comma + 1));
        } else {
            throw std::invalid_argument("MeasurementSpec: unknown key '" + key + "'");
        }
    }
    validate(s);
    return s;
}

inline std::string MeasurementSpec::format() const {
    std::ostringstream out;
    const char* names = "xyz";
    for (int a = 0; a < 3; ++a) out << names[a] << ':' << up[a] << ',' << down[a] << ' ';
    out << "pow:" << power;
    return out.str();
}

/// A likelihood factor over prior coordinates (3D Bloch or 4D escort layout).
struct LikelihoodField {
    int dim = 3;
    MeasurementSpec spec;
    std::function<double(std::span<const double>)> value;
};

namespace detail {

inline double axis_product(const MeasurementSpec& s, double ax, double ay, double az) {
    const double a[3] = {ax, ay, az};
    double prod = 1.0;
    for (int i = 0; i < 3; ++i) {
        if (s.up[i] > 0) prod *= std::pow(0.5 * (1.0 + a[i]), s.up[i]);
        if (s.down[i] > 0) prod *= std::pow(0.5 * (1.0 - a[i]), s.down[i]);
    }
    return prod;
}

}  // namespace detail

/// Standard 3D likelihood over (r, theta1, theta2): product over axes of
/// ((1+w)/2)^{n_up} ((1-w)/2)^{n_down} with w in {x,y,z}, raised to `power`.
inline LikelihoodField likelihood(const MeasurementSpec& spec) {
    validate(spec);
    return {3, spec, [spec](std::span<const double> x) {
                const Cartesian c = to_cartesian({x[0], x[1], x[2]});
                const double p = detail::axis_product(spec, c.x, c.y, c.z);
                return spec.power == 1.0 ? p : std::pow(p, spec.power);
            }};
}

/// Escort (4D) likelihood over (q, r, theta1, theta2): outcome probabilities
/// (1 +/- tau n_i)/2 where tau = tanh(q atanh r) and n is the unit Bloch
/// direction; at q = 1 this reduces to the standard field.
inline LikelihoodField likelihood_q(const MeasurementSpec& spec) {
    validate(spec);
    return {4, spec, [spec](std::span<const double> x) {
                const double tau = escort_polarization(x[0], x[1]);
                const double s1 = std::sin(x[2]);
                const double nx = std::cos(x[2]), ny = s1 * std::cos(x[3]), nz = s1 * std::sin(x[3]);
                const double p = detail::axis_product(spec, tau * nx, tau * ny, tau * nz);
                return spec.power == 1.0 ? p : std::pow(p, spec.power);
            }};
}

struct GainResult {
    double nats = 0.0;
    double evidence = 0.0;
    long evals = 0;
    bool converged = true;
};

/// Bayes update: posterior density proportional to prior * likelihood,
/// renormalized by quadrature; the evidence lands in `normalization`.
inline PriorDensity posterior(const PriorDensity& prior, const LikelihoodField& like,
                              double rel_tol = 1e-8) {
    if (prior.dim() != like.dim) throw std::invalid_argument("posterior: prior/likelihood dimension mismatch");
    auto pd = prior.density;
    auto lv = like.value;
    IntegrationResult ev = integrate(
        [&](std::span<const double> x) { return pd(x) * lv(x); }, domain_spec(prior, rel_tol));
    if (!ev.converged) throw std::runtime_error("posterior: evidence integral did not converge");
    if (!(ev.value > 0.0)) throw std::domain_error("posterior: zero evidence");
    const double e = ev.value;
    PriorDensity post;
    post.name = prior.name + "|" + like.spec.format();
    post.axes = prior.axes;
    post.normalization = e;
    post.density = [pd, lv, e](std::span<const double> x) { return pd(x) * lv(x) / e; };
    return post;
}

namespace detail {

/// S_KL(posterior || prior) = (1/E) int p L log L - log E, with E = int p L.
template <class Density, class Like>
GainResult info_gain_impl(Density&& pd, Like&& lv, const IntegrationSpec& spec) {
    IntegrationResult ev = integrate([&](std::span<const double> x) { return pd(x) * lv(x); }, spec);
    if (!(ev.value > 0.0)) throw std::domain_error("info_gain: zero evidence");
    IntegrationResult gn = integrate(
        [&](std::span<const double> x) {
            const double pl = pd(x) * lv(x);
            if (pl <= 0.0) return 0.0;
            return pl * std::log(lv(x));
        },
        spec);
    GainResult r;
    r.evidence = ev.value;
    r.nats = gn.value / ev.value - std::log(ev.value);
    r.evals = ev.evals + gn.evals;
    r.converged = ev.converged && gn.converged;
    if (r.nats < 0.0 && r.nats > -1e-9) r.nats = 0.0;
    return r;
}

}  // namespace detail

/// Information gain S_KL(posterior || prior) for a 3D prior.
inline GainResult info_gain(const PriorDensity& prior, const LikelihoodField& like,
                            double rel_tol = 1e-8) {
    if (prior.dim() != like.dim) throw std::invalid_argument("info_gain: dimension mismatch");
    return detail::info_gain_impl(prior.density, like.value, domain_spec(prior, rel_tol));
}

/// Information gain over a 4D (Bloch x q) prior with the escort likelihood.
inline GainResult info_gain_qext(const PriorDensity& prior4d, const MeasurementSpec& spec,
                                 double rel_tol = 1e-5) {
    if (prior4d.dim() != 4) throw std::invalid_argument("info_gain_qext: prior must be 4D");
    LikelihoodField lq = likelihood_q(spec);
    return detail::info_gain_impl(prior4d.density, lq.value, domain_spec(prior4d, rel_tol));
}

}  // namespace qprior
