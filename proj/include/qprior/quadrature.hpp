#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace qprior {

/// Per-coordinate change of variable applied before integration.
///   none:       x = t
///   sqrt_upper: x = hi - t^2  (absorbs (hi-x)^(-1/2) and log(hi-x) endpoint
///               singularities; mandatory for Bloch radial integrands with
///               1/sqrt(1-r^2) or log(1/W) factors)
///   log_scale:  x = e^t       (for q-ranges wider than a decade; lo > 0)
enum class AxisTransform { none, sqrt_upper, log_scale };

struct Axis {
    double lo = 0.0;
    double hi = 1.0;
    AxisTransform transform = AxisTransform::none;
};

struct IntegrationSpec {
    std::vector<Axis> axes;
    double rel_tol = 1e-8;
    double abs_tol = 1e-14;
    long max_evals = 100000000L;
};

struct IntegrationResult {
    double value = 0.0;
    double error_estimate = 0.0;
    long evals = 0;
    bool converged = false;
    std::string note;
};

inline IntegrationSpec make_spec(std::vector<Axis> axes, double rel_tol, double abs_tol = 1e-14,
                                 long max_evals = 100000000L) {
    for (const auto& a : axes) {
        if (!(a.hi > a.lo)) throw std::invalid_argument("IntegrationSpec: degenerate interval");
        if (a.transform == AxisTransform::log_scale && a.lo <= 0.0)
            throw std::invalid_argument("IntegrationSpec: log_scale requires lo > 0");
    }
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) throw std::invalid_argument("IntegrationSpec: tolerances must be > 0");
    return IntegrationSpec{std::move(axes), rel_tol, abs_tol, max_evals};
}

namespace detail {

// 15-point Kronrod nodes/weights on [-1,1] plus embedded 7-point Gauss weights
// (odd-indexed nodes). Standard QUADPACK constants.
inline constexpr std::array<double, 15> kKronrodNodes = {
    -0.991455371120812639206854697526329, -0.949107912342758524526189684047851,
    -0.864864423359769072789712788640926, -0.741531185599394439863864773280788,
    -0.586087235467691130294144838258730, -0.405845151377397166906606412076961,
    -0.207784955007898467600689403773245, 0.0,
    0.207784955007898467600689403773245,  0.405845151377397166906606412076961,
    0.586087235467691130294144838258730,  0.741531185599394439863864773280788,
    0.864864423359769072789712788640926,  0.949107912342758524526189684047851,
    0.991455371120812639206854697526329};

inline constexpr std::array<double, 15> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
    0.204432940075298892414161999234649, 0.190350578064785409913256402421014,
    0.169004726639267902826583426598550, 0.140653259715525918745189590510238,
    0.104790010322250183839876322541518, 0.063092092629978553290700663189204,
    0.022935322010529224963732008058970};

inline constexpr std::array<double, 7> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327,
    0.381830050505118944950369775488975, 0.279705391489276667901467771423780,
    0.129484966168869693270611432679082};

// Gauss weight embedded on the 15-point grid, expressed as a ratio to the
// Kronrod weight at the same node (zero at pure-Kronrod nodes).
inline const std::array<double, 15>& gauss_ratio() {
    static const std::array<double, 15> r = [] {
        std::array<double, 15> out{};
        for (int i = 0; i < 15; ++i)
            out[static_cast<std::size_t>(i)] =
                (i % 2 == 1) ? kGaussWeights[static_cast<std::size_t>((i - 1) / 2)] / kKronrodWeights[static_cast<std::size_t>(i)] : 0.0;
        return out;
    }();
    return r;
}

struct Region {
    std::array<double, 4> lo{};
    std::array<double, 4> hi{};
    double value = 0.0;
    double error = 0.0;
    int split_axis = 0;
    std::uint64_t id = 0;
};

struct TransformedAxis {
    double lo, hi;
    AxisTransform tf;
    double orig_hi;  // for sqrt_upper
};

inline TransformedAxis to_transformed(const Axis& a) {
    switch (a.transform) {
        case AxisTransform::none: return {a.lo, a.hi, a.transform, a.hi};
        case AxisTransform::sqrt_upper: return {0.0, std::sqrt(a.hi - a.lo), a.transform, a.hi};
        case AxisTransform::log_scale: return {std::log(a.lo), std::log(a.hi), a.transform, a.hi};
    }
    throw std::logic_error("unreachable");
}

inline double from_transformed(const TransformedAxis& ax, double t, double& jac) {
    switch (ax.tf) {
        case AxisTransform::none: jac = 1.0; return t;
        case AxisTransform::sqrt_upper: {
            jac = 2.0 * t;
            double x = ax.orig_hi - t * t;
            // deep refinement can make t^2 underflow against hi; keep the
            // sample strictly inside the open interval
            if (x >= ax.orig_hi && t > 0.0) x = std::nextafter(ax.orig_hi, -1e300);
            return x;
        }
        case AxisTransform::log_scale: {
            const double x = std::exp(t);
            jac = x;
            return x;
        }
    }
    throw std::logic_error("unreachable");
}

/// Tensor GK15/G7 rule over one region (transformed coordinates). Returns the
/// Kronrod value; per-axis |K - mixed-G| differences drive the error estimate
/// and the split axis choice.
template <class F>
void gk_rule(F&& f, const std::vector<TransformedAxis>& axes, Region& reg, long& evals) {
    const int d = static_cast<int>(axes.size());
    std::array<double, 4> mid{}, half{};
    double volume = 1.0;
    for (int k = 0; k < d; ++k) {
        mid[static_cast<std::size_t>(k)] = 0.5 * (reg.lo[static_cast<std::size_t>(k)] + reg.hi[static_cast<std::size_t>(k)]);
        half[static_cast<std::size_t>(k)] = 0.5 * (reg.hi[static_cast<std::size_t>(k)] - reg.lo[static_cast<std::size_t>(k)]);
        volume *= half[static_cast<std::size_t>(k)];
    }

    const auto& gr = gauss_ratio();
    double ik = 0.0;
    std::array<double, 4> imix{};
    std::array<int, 4> idx{};
    std::array<double, 4> x{}, xt{};

    long npts = 1;
    for (int k = 0; k < d; ++k) npts *= 15;

    for (long p = 0; p < npts; ++p) {
        long rem = p;
        double wk = 1.0;
        double jac_all = 1.0;
        for (int k = 0; k < d; ++k) {
            idx[static_cast<std::size_t>(k)] = static_cast<int>(rem % 15);
            rem /= 15;
            const int i = idx[static_cast<std::size_t>(k)];
            wk *= kKronrodWeights[static_cast<std::size_t>(i)];
            const double t = mid[static_cast<std::size_t>(k)] + half[static_cast<std::size_t>(k)] * kKronrodNodes[static_cast<std::size_t>(i)];
            double j;
            x[static_cast<std::size_t>(k)] = from_transformed(axes[static_cast<std::size_t>(k)], t, j);
            jac_all *= j;
            xt[static_cast<std::size_t>(k)] = t;
        }
        const double fv = f(std::span<const double>(x.data(), static_cast<std::size_t>(d))) * jac_all;
        if (!std::isfinite(fv)) {
            std::string pt;
            for (int k = 0; k < d; ++k) pt += (k ? "," : "") + std::to_string(x[static_cast<std::size_t>(k)]);
            throw std::domain_error("integrate: non-finite integrand at (" + pt + ")");
        }
        const double wf = wk * fv;
        ik += wf;
        for (int k = 0; k < d; ++k) imix[static_cast<std::size_t>(k)] += wf * gr[static_cast<std::size_t>(idx[static_cast<std::size_t>(k)])];
    }
    evals += npts;

    reg.value = ik * volume;
    double err = 0.0;
    int split = 0;
    double emax = -1.0;
    for (int k = 0; k < d; ++k) {
        const double ek = std::abs(ik - imix[static_cast<std::size_t>(k)]) * volume;
        err += ek;
        if (ek > emax) {
            emax = ek;
            split = k;
        }
    }
    reg.error = err;
    reg.split_axis = split;
}

}  // namespace detail

/// Deterministic adaptive integration over a 1D-4D box: tensor Gauss-Kronrod
/// panels, bisection of the largest-error region along its worst axis.
/// Identical spec and integrand give bit-identical results run to run.
template <class F>
IntegrationResult integrate(F&& f, const IntegrationSpec& spec) {
    const int d = static_cast<int>(spec.axes.size());
    if (d < 1 || d > 4) throw std::invalid_argument("integrate: dimension must be 1..4");

    std::vector<detail::TransformedAxis> axes;
    axes.reserve(static_cast<std::size_t>(d));
    for (const auto& a : spec.axes) axes.push_back(detail::to_transformed(a));

    long evals = 0;
    std::uint64_t next_id = 0;
    std::vector<detail::Region> regions;
    detail::Region root;
    for (int k = 0; k < d; ++k) {
        root.lo[static_cast<std::size_t>(k)] = axes[static_cast<std::size_t>(k)].lo;
        root.hi[static_cast<std::size_t>(k)] = axes[static_cast<std::size_t>(k)].hi;
    }
    root.id = next_id++;
    detail::gk_rule(f, axes, root, evals);
    regions.push_back(root);

    // binary max-heap on (error, id); deterministic tie-break on id
    auto cmp = [](const detail::Region& a, const detail::Region& b) {
        if (a.error != b.error) return a.error < b.error;
        return a.id > b.id;
    };
    std::make_heap(regions.begin(), regions.end(), cmp);

    double total_value = root.value;
    double total_error = root.error;

    // regions thinner than this (relative to the root extent of the split
    // axis) are frozen rather than split further
    std::array<double, 4> min_width{};
    for (int k = 0; k < d; ++k)
        min_width[static_cast<std::size_t>(k)] =
            1e-7 * (axes[static_cast<std::size_t>(k)].hi - axes[static_cast<std::size_t>(k)].lo);
    std::vector<detail::Region> frozen;
    double frozen_value = 0.0, frozen_error = 0.0;

    while (true) {
        const double tol = std::max(spec.rel_tol * std::abs(total_value + frozen_value), spec.abs_tol);
        if (total_error + frozen_error <= tol) break;
        if (regions.empty()) {
            std::string note = "all regions at minimal width with error above tolerance";
            std::sort(frozen.begin(), frozen.end(),
                      [](const detail::Region& a, const detail::Region& b) { return a.id < b.id; });
            double v = 0.0, e = 0.0;
            for (const auto& r : frozen) {
                v += r.value;
                e += r.error;
            }
            return {v, e, evals, false, note};
        }
        if (evals >= spec.max_evals) {
            // sum in id order for a deterministic, addition-order-independent value
            for (const auto& r : frozen) regions.push_back(r);
            std::sort(regions.begin(), regions.end(),
                      [](const detail::Region& a, const detail::Region& b) { return a.id < b.id; });
            double v = 0.0, e = 0.0;
            for (const auto& r : regions) {
                v += r.value;
                e += r.error;
            }
            return {v, e, evals, false, "max_evals reached with error above tolerance"};
        }

        std::pop_heap(regions.begin(), regions.end(), cmp);
        detail::Region worst = regions.back();
        regions.pop_back();
        total_value -= worst.value;
        total_error -= worst.error;

        if (worst.hi[static_cast<std::size_t>(worst.split_axis)] - worst.lo[static_cast<std::size_t>(worst.split_axis)] <
            min_width[static_cast<std::size_t>(worst.split_axis)]) {
            frozen.push_back(worst);
            frozen_value += worst.value;
            frozen_error += worst.error;
            continue;
        }

        const int k = worst.split_axis;
        const double m = 0.5 * (worst.lo[static_cast<std::size_t>(k)] + worst.hi[static_cast<std::size_t>(k)]);
        detail::Region left = worst, right = worst;
        left.hi[static_cast<std::size_t>(k)] = m;
        right.lo[static_cast<std::size_t>(k)] = m;
        left.id = next_id++;
        right.id = next_id++;
        detail::gk_rule(f, axes, left, evals);
        detail::gk_rule(f, axes, right, evals);
        total_value += left.value + right.value;
        total_error += left.error + right.error;
        regions.push_back(left);
        std::push_heap(regions.begin(), regions.end(), cmp);
        regions.push_back(right);
        std::push_heap(regions.begin(), regions.end(), cmp);
    }

    for (const auto& r : frozen) regions.push_back(r);
    std::sort(regions.begin(), regions.end(),
              [](const detail::Region& a, const detail::Region& b) { return a.id < b.id; });
    double v = 0.0, e = 0.0;
    for (const auto& r : regions) {
        v += r.value;
        e += r.error;
    }
    return {v, e, evals, true, {}};
}

namespace detail {

/// splitmix64: tiny, portable, deterministic uniform generator for the Monte
/// Carlo cross-check and domain samplers.
struct SplitMix64 {
    std::uint64_t state;
    explicit SplitMix64(std::uint64_t seed) : state(seed) {}
    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

}  // namespace detail

/// Plain Monte Carlo sanity oracle on the transformed domain; value plus
/// standard error of the mean.
template <class F>
IntegrationResult mc_check(F&& f, const IntegrationSpec& spec, std::uint64_t seed, long n) {
    if (n < 1000) throw std::invalid_argument("mc_check: n must be >= 1000");
    const int d = static_cast<int>(spec.axes.size());
    std::vector<detail::TransformedAxis> axes;
    for (const auto& a : spec.axes) axes.push_back(detail::to_transformed(a));
    double volume = 1.0;
    for (const auto& ax : axes) volume *= (ax.hi - ax.lo);

    detail::SplitMix64 rng(seed);
    double mean = 0.0, m2 = 0.0;
    std::array<double, 4> x{};
    for (long i = 0; i < n; ++i) {
        double jac = 1.0;
        for (int k = 0; k < d; ++k) {
            const auto& ax = axes[static_cast<std::size_t>(k)];
            const double t = ax.lo + (ax.hi - ax.lo) * rng.uniform();
            double j;
            x[static_cast<std::size_t>(k)] = detail::from_transformed(ax, t, j);
            jac *= j;
        }
        const double fv = f(std::span<const double>(x.data(), static_cast<std::size_t>(d))) * jac;
        if (!std::isfinite(fv)) throw std::domain_error("mc_check: non-finite integrand sample");
        const double delta = fv - mean;
        mean += delta / static_cast<double>(i + 1);
        m2 += delta * (fv - mean);
    }
    const double var = m2 / static_cast<double>(n - 1);
    const double se = std::sqrt(var / static_cast<double>(n)) * volume;
    return {mean * volume, se, n, true, "monte carlo"};
}

}  // namespace qprior
