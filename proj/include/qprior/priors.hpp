#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "qprior/metrics.hpp"
#include "qprior/quadrature.hpp"

namespace qprior {

/// Configuration shared by the prior constructors.
struct PriorConfig {
    double q_min = 0.5;
    double q_max = 500.0;
    std::string pb_convention = "sqrt";  // "sqrt" | "printed"
    double pb_printed_delta = 1e-6;      // truncation 1 - delta for the printed form
    bool verify_normalization = false;
    double verify_rel_tol = 1e-8;
};

/// A named, normalized probability density over a boxed coordinate domain.
/// `density` includes every Jacobian factor (notably sin theta1);
/// `normalization` is the raw volume-element mass that was divided out.
/// The built-in priors are uniform over the sphere angles, so they carry
/// reduced marginal profiles that the marginal/KL machinery exploits.
struct PriorDensity {
    std::string name;
    std::vector<Axis> axes;  // 3D: (r,theta1,theta2); 4D: (q,r,theta1,theta2)
    std::function<double(std::span<const double>)> density;
    double normalization = 1.0;
    std::function<double(double)> radial_marginal;                 // 3D priors
    std::function<double(double, double)> qr_marginal;             // 4D priors
    int dim() const { return static_cast<int>(axes.size()); }
};

inline IntegrationSpec domain_spec(const PriorDensity& p, double rel_tol, long max_evals = 100000000L) {
    return make_spec(p.axes, rel_tol, 1e-14, max_evals);
}

namespace detail {

inline std::vector<Axis> bloch_axes() {
    return {Axis{0.0, 1.0, AxisTransform::sqrt_upper}, Axis{0.0, std::numbers::pi, AxisTransform::none},
            Axis{0.0, 2.0 * std::numbers::pi, AxisTransform::none}};
}

inline std::vector<Axis> bloch_q_axes(double q_min, double q_max) {
    std::vector<Axis> a = bloch_axes();
    const AxisTransform tq = (q_max / q_min > 10.0) ? AxisTransform::log_scale : AxisTransform::none;
    a.insert(a.begin(), Axis{q_min, q_max, tq});
    return a;
}

/// Raw (q,r) profile of the truncated extended Bures volume element with the
/// angular mass folded in: integral over angles of sqrt(det g) equals
/// 4 pi * v4(q,r), and int_0^1 4 pi v4 dr = pi (1+log 4)/(24 q).
inline double bures_trunc_qr_raw(double q, double r) {
    const double L = log_inv_w(r);
    const double tau = escort_polarization(q, r);
    const double t2 = tau * tau;
    return 4.0 * std::numbers::pi * q * L * t2 * (1.0 - t2) / (32.0 * (1.0 - r * r));
}

/// Raw q=1 Fisher-Husimi radial profiles (angular mass folded in).
inline double fisher_3d_r_raw(double r) {
    const double g_rr = radial_gamma(r) / (2.0 * r * r * r);
    const double tang = radial_alpha(r) / (4.0 * r * r * r);
    return 4.0 * std::numbers::pi * std::sqrt(g_rr) * tang * r * r;
}

inline double fisher_ext_q1_r_raw(double r) {
    const double det2 = fisher_husimi_q1_block_det(r);
    const double tang = radial_alpha(r) / (4.0 * r * r * r);
    return 4.0 * std::numbers::pi * std::sqrt(det2) * tang * r * r;
}

inline double integrate_radial_raw(const std::function<double(double)>& f, double rel_tol = 1e-11) {
    IntegrationSpec spec = make_spec({Axis{0.0, 1.0, AxisTransform::sqrt_upper}}, rel_tol, 1e-15);
    auto g = [&](std::span<const double> x) { return x[0] < 1e-12 ? 0.0 : f(x[0]); };
    IntegrationResult res = integrate(g, spec);
    if (!res.converged) throw std::runtime_error("prior normalization integral did not converge");
    return res.value;
}

}  // namespace detail

/// Normalization constant of p_F, recomputed by quadrature once per process.
inline double fisher_husimi_norm_constant() {
    static const double n = detail::integrate_radial_raw(detail::fisher_3d_r_raw);
    return n;
}

/// Normalization constant of p_Fq1, recomputed by quadrature once per process.
inline double fisher_husimi_extended_q1_norm_constant() {
    static const double n = detail::integrate_radial_raw(detail::fisher_ext_q1_r_raw);
    return n;
}

/// Raw (q,r) profile of the 4D extended Husimi volume element (general q):
/// 4 pi sqrt(det of the (q,r) Fisher block) times tangential r^2 factors.
/// The (q,r) block needs 1D numerical integration in c = cos gamma.
inline double husimi_qext_qr_raw(double q, double r, double rel_tol = 1e-9) {
    if (r < 1e-7) return 0.0;  // profile vanishes as r^4
    MetricTensor g = fisher_numeric({{r, 0.5 * std::numbers::pi, 0.0}, q}, rel_tol);
    const double det2 = std::max(g.at(0, 0) * g.at(1, 1) - g.at(0, 1) * g.at(0, 1), 0.0);
    const double tang = g.at(2, 2) / (r * r);
    return 4.0 * std::numbers::pi * std::sqrt(det2) * tang * r * r;
}

/// Husimi 4D raw q-marginal m(q) = int_0^1 husimi_qext_qr_raw dr; the curve
/// whose peak the report pins down.
inline double husimi_qext_q_marginal_raw(double q, double rel_tol = 1e-7) {
    IntegrationSpec spec = make_spec({Axis{0.0, 1.0, AxisTransform::sqrt_upper}}, rel_tol, 1e-13);
    auto f = [&](std::span<const double> x) { return husimi_qext_qr_raw(q, x[0]); };
    IntegrationResult res = integrate(f, spec);
    if (!res.converged) throw std::runtime_error("husimi q-marginal integral did not converge");
    return res.value;
}

/// Constructs one of the named priors. Unknown names and non-normalizable
/// configurations (q_max = infinity for the 4D Bures prior) are errors.
inline PriorDensity build_prior(const std::string& name, const PriorConfig& cfg = {}) {
    const double pi = std::numbers::pi;
    PriorDensity p;
    p.name = name;

    auto finish_radial = [&](std::function<double(double)> raw_radial, double norm) {
        p.axes = detail::bloch_axes();
        p.normalization = norm;
        p.radial_marginal = [raw_radial, norm](double r) { return raw_radial(r) / norm; };
        auto rm = p.radial_marginal;
        p.density = [rm](std::span<const double> x) {
            return rm(x[0]) * std::sin(x[1]) / (4.0 * std::numbers::pi);
        };
    };

    if (name == "p_B") {
        if (cfg.pb_convention == "sqrt") {
            // true volume element r^2 sin(t1)/(8 sqrt(1-r^2)); total mass pi^2/8
            auto raw = [](double r) {
                return 4.0 * std::numbers::pi * r * r / (8.0 * std::sqrt((1.0 - r) * (1.0 + r)));
            };
            finish_radial(raw, pi * pi / 8.0);
        } else if (cfg.pb_convention == "printed") {
            // printed r^2 sin(t1)/(8 (1-r^2)), normalizable only after
            // truncating the domain at r = 1 - delta
            const double d = cfg.pb_printed_delta;
            if (!(d > 0.0 && d < 1.0)) throw std::invalid_argument("p_B printed: delta must lie in (0,1)");
            const double rmax = 1.0 - d;
            const double mass = 0.5 * pi * (std::atanh(rmax) - rmax);
            p.axes = detail::bloch_axes();
            p.axes[0].hi = rmax;
            p.normalization = mass;
            p.radial_marginal = [mass](double r) {
                return 4.0 * std::numbers::pi * r * r / (8.0 * (1.0 - r * r)) / mass;
            };
            auto rm = p.radial_marginal;
            p.density = [rm](std::span<const double> x) {
                return rm(x[0]) * std::sin(x[1]) / (4.0 * std::numbers::pi);
            };
        } else {
            throw std::invalid_argument("p_B: unknown convention '" + cfg.pb_convention + "'");
        }
    } else if (name == "p_Btrunc") {
        auto raw = [](double r) { return 4.0 * std::numbers::pi * r * r * log_inv_w(r) / 32.0; };
        finish_radial(raw, pi * (1.0 + std::log(4.0)) / 24.0);
    } else if (name == "p_F") {
        finish_radial(detail::fisher_3d_r_raw, fisher_husimi_norm_constant());
    } else if (name == "p_Fq1") {
        finish_radial(detail::fisher_ext_q1_r_raw, fisher_husimi_extended_q1_norm_constant());
    } else if (name == "p_Bqext4D") {
        if (!(std::isfinite(cfg.q_max)) || !(cfg.q_max > cfg.q_min) || !(cfg.q_min > 0.0))
            throw std::domain_error("p_Bqext4D: requires finite 0 < q_min < q_max (mass diverges otherwise)");
        const double mass = pi * (1.0 + std::log(4.0)) / 24.0 * std::log(cfg.q_max / cfg.q_min);
        p.axes = detail::bloch_q_axes(cfg.q_min, cfg.q_max);
        p.normalization = mass;
        p.qr_marginal = [mass](double q, double r) { return detail::bures_trunc_qr_raw(q, r) / mass; };
        auto qr = p.qr_marginal;
        p.density = [qr](std::span<const double> x) {
            return qr(x[0], x[1]) * std::sin(x[2]) / (4.0 * std::numbers::pi);
        };
    } else if (name == "p_Fqext4D") {
        if (!(std::isfinite(cfg.q_max)) || !(cfg.q_max > cfg.q_min) || !(cfg.q_min > 0.0))
            throw std::domain_error("p_Fqext4D: requires finite 0 < q_min < q_max");
        // mass by 2D quadrature of the reduced profile
        IntegrationSpec spec = make_spec(
            {Axis{cfg.q_min, cfg.q_max, AxisTransform::log_scale}, Axis{0.0, 1.0, AxisTransform::sqrt_upper}},
            1e-6, 1e-12);
        IntegrationResult res =
            integrate([](std::span<const double> x) { return husimi_qext_qr_raw(x[0], x[1]); }, spec);
        if (!res.converged) throw std::runtime_error("p_Fqext4D: normalization integral did not converge");
        const double mass = res.value;
        p.axes = detail::bloch_q_axes(cfg.q_min, cfg.q_max);
        p.normalization = mass;
        p.qr_marginal = [mass](double q, double r) { return husimi_qext_qr_raw(q, r) / mass; };
        auto qr = p.qr_marginal;
        p.density = [qr](std::span<const double> x) {
            return qr(x[0], x[1]) * std::sin(x[2]) / (4.0 * std::numbers::pi);
        };
    } else {
        throw std::invalid_argument("build_prior: unknown prior name '" + name + "'");
    }

    if (cfg.verify_normalization) {
        IntegrationResult res = integrate(p.density, domain_spec(p, cfg.verify_rel_tol));
        if (!res.converged || std::abs(res.value - 1.0) > 1e-6)
            throw std::runtime_error("build_prior: " + name + " mass " + std::to_string(res.value) +
                                     " deviates from 1 beyond 1e-6");
    }
    return p;
}

struct MarginalCurve {
    std::string variable;
    std::vector<double> grid;
    std::vector<double> values;
    bool raw = false;  // true: values scaled back by the prior's normalization
};

/// Univariate marginal of a prior on a grid. `raw` multiplies the normalized
/// marginal by the prior's normalization constant (the unnormalized
/// volume-element marginal, as in the per-q closed form pi(1+log4)/(24 q)).
inline MarginalCurve marginal(const PriorDensity& p, const std::string& variable,
                              std::vector<double> grid, bool raw = false, double rel_tol = 1e-7) {
    MarginalCurve c;
    c.variable = variable;
    c.grid = std::move(grid);
    c.raw = raw;
    c.values.reserve(c.grid.size());

    auto scale = raw ? p.normalization : 1.0;

    if (p.dim() == 3) {
        if (variable != "r") throw std::invalid_argument("marginal: 3D priors have only the r marginal");
        for (double r : c.grid) {
            double v;
            if (p.radial_marginal) {
                v = p.radial_marginal(r);
            } else {
                IntegrationSpec spec = make_spec({p.axes[1], p.axes[2]}, rel_tol, 1e-13);
                v = integrate([&](std::span<const double> a) {
                        const double x[3] = {r, a[0], a[1]};
                        return p.density(std::span<const double>(x, 3));
                    },
                    spec)
                        .value;
            }
            c.values.push_back(v * scale);
        }
        return c;
    }

    if (!p.qr_marginal) throw std::invalid_argument("marginal: 4D prior lacks a reduced profile");
    if (variable == "q") {
        IntegrationSpec spec = make_spec({Axis{0.0, 1.0, AxisTransform::sqrt_upper}}, rel_tol, 1e-13);
        for (double q : c.grid)
            c.values.push_back(
                integrate([&](std::span<const double> x) { return p.qr_marginal(q, x[0]); }, spec).value * scale);
    } else if (variable == "r") {
        IntegrationSpec spec = make_spec({p.axes[0]}, rel_tol, 1e-13);
        for (double r : c.grid)
            c.values.push_back(
                integrate([&](std::span<const double> x) { return p.qr_marginal(x[0], r); }, spec).value * scale);
    } else {
        throw std::invalid_argument("marginal: variable must be r or q");
    }
    return c;
}

/// Antiderivative in q of the (q,r) marginal of the truncated extended Bures
/// volume element; differences across q-limits give the r marginal.
inline double extended_bures_q_antiderivative(double q, double r) {
    if (!(r > 0.0 && r < 1.0)) throw std::domain_error("extended_bures_q_antiderivative: r must lie in (0,1)");
    if (!(q > 0.0)) throw std::domain_error("extended_bures_q_antiderivative: q must be > 0");
    const double pi = std::numbers::pi;
    const double L = log_inv_w(r);                 // -log W
    const double u = std::exp(-q * L);             // W^q
    const double opu = 1.0 + u;
    const double num = -q * L * u * (3.0 + u * u) - opu * (2.0 * u + opu * opu * std::log1p(u));
    const double den = 6.0 * (r * r - 1.0) * opu * opu * opu * (-L);
    return pi * num / den;
}

struct DominanceSample {
    double r = 0.0;
    std::vector<double> values;       // one per prior, prior order
    std::vector<int> descending;      // indices of priors, largest first
};

struct DominanceReport {
    std::vector<std::string> names;
    std::vector<DominanceSample> samples;
    bool single_order = false;             // one total order at every sample
    std::vector<int> order;                // that order when single_order
    std::vector<int> order_near_zero;      // descending order at r_near_zero
    double r_near_zero = 0.05;
    bool reversed_near_zero = false;       // near-zero order == exact reverse
};

/// Pointwise ordering of the univariate r-marginals at n radii in
/// [1-epsilon, 1), plus the near-r=0 ordering and whether it is the exact
/// reverse of the near-pure-state one.
inline DominanceReport pure_state_dominance(const std::vector<PriorDensity>& priors, double epsilon,
                                            int n, double r_near_zero = 0.05) {
    if (priors.size() < 2) throw std::invalid_argument("pure_state_dominance: need at least two priors");
    if (!(epsilon > 0.0 && epsilon < 1.0) || n < 1) throw std::invalid_argument("pure_state_dominance: bad arguments");

    auto marg = [&](const PriorDensity& p, double r) {
        if (p.radial_marginal) return p.radial_marginal(r);
        throw std::invalid_argument("pure_state_dominance: prior " + p.name + " lacks an r marginal");
    };
    auto rank_at = [&](double r, std::vector<double>& vals) {
        vals.clear();
        for (const auto& p : priors) vals.push_back(marg(p, r));
        std::vector<int> idx(priors.size());
        for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
        std::sort(idx.begin(), idx.end(), [&](int a, int b) {
            if (vals[static_cast<std::size_t>(a)] != vals[static_cast<std::size_t>(b)])
                return vals[static_cast<std::size_t>(a)] > vals[static_cast<std::size_t>(b)];
            return a < b;  // deterministic tie order; ties reported as not a strict order
        });
        return idx;
    };

    DominanceReport rep;
    for (const auto& p : priors) rep.names.push_back(p.name);
    rep.r_near_zero = r_near_zero;

    bool consistent = true;
    std::vector<int> first_order;
    for (int k = 0; k < n; ++k) {
        DominanceSample s;
        s.r = 1.0 - epsilon + epsilon * static_cast<double>(k) / static_cast<double>(n);
        s.descending = rank_at(s.r, s.values);
        if (k == 0)
            first_order = s.descending;
        else if (s.descending != first_order)
            consistent = false;
        // exact ties make the order non-strict
        for (std::size_t i = 0; i + 1 < s.descending.size(); ++i)
            if (s.values[static_cast<std::size_t>(s.descending[i])] ==
                s.values[static_cast<std::size_t>(s.descending[i + 1])])
                consistent = false;
        rep.samples.push_back(std::move(s));
    }
    rep.single_order = consistent;
    if (consistent) rep.order = first_order;

    std::vector<double> v0;
    rep.order_near_zero = rank_at(r_near_zero, v0);
    std::vector<int> rev(first_order.rbegin(), first_order.rend());
    rep.reversed_near_zero = (rep.order_near_zero == rev);
    return rep;
}

}  // namespace qprior
