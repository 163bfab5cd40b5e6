#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "qprior/families.hpp"
#include "qprior/ffunctions.hpp"
#include "qprior/linalg.hpp"
#include "qprior/quadrature.hpp"

namespace qprior {

/// Symmetric metric coefficient matrix at a point, ds^2 = sum g_ij dx_i dx_j
/// with both (i,j) and (j,i) terms counted. Dimension up to 5.
struct MetricTensor {
    std::vector<std::string> labels;
    int dim = 0;
    std::array<double, 25> g{};

    double& at(int i, int j) { return g[static_cast<std::size_t>(i * dim + j)]; }
    double at(int i, int j) const { return g[static_cast<std::size_t>(i * dim + j)]; }

    static MetricTensor zero(std::vector<std::string> labels_) {
        MetricTensor m;
        m.dim = static_cast<int>(labels_.size());
        m.labels = std::move(labels_);
        if (m.dim < 1 || m.dim > 5) throw std::invalid_argument("MetricTensor: dim must be 1..5");
        return m;
    }

    /// Determinant by Gaussian elimination with partial pivoting.
    double det() const {
        std::array<double, 25> a = g;
        const int n = dim;
        double d = 1.0;
        for (int c = 0; c < n; ++c) {
            int piv = c;
            for (int rr = c + 1; rr < n; ++rr)
                if (std::abs(a[static_cast<std::size_t>(rr * n + c)]) > std::abs(a[static_cast<std::size_t>(piv * n + c)])) piv = rr;
            if (a[static_cast<std::size_t>(piv * n + c)] == 0.0) return 0.0;
            if (piv != c) {
                for (int j = 0; j < n; ++j) std::swap(a[static_cast<std::size_t>(c * n + j)], a[static_cast<std::size_t>(piv * n + j)]);
                d = -d;
            }
            const double p = a[static_cast<std::size_t>(c * n + c)];
            d *= p;
            for (int rr = c + 1; rr < n; ++rr) {
                const double f = a[static_cast<std::size_t>(rr * n + c)] / p;
                for (int j = c; j < n; ++j) a[static_cast<std::size_t>(rr * n + j)] -= f * a[static_cast<std::size_t>(c * n + j)];
            }
        }
        return d;
    }

    double diag_product() const {
        double p = 1.0;
        for (int i = 0; i < dim; ++i) p *= at(i, i);
        return p;
    }

    /// sqrt(max(det, 0)); the scale-free degeneracy test compares |det|
    /// against tol times the product of diagonal entries.
    double volume_element() const { return std::sqrt(std::max(det(), 0.0)); }
    bool degenerate(double tol = 1e-10) const { return std::abs(det()) < tol * std::abs(diag_product()); }

    /// Smallest eigenvalue via Jacobi on the (real symmetric) coefficient
    /// matrix; used by the PSD property checks.
    double min_eigenvalue() const {
        std::array<double, 25> a = g;
        const int n = dim;
        for (int sweep = 0; sweep < 60; ++sweep) {
            double off = 0.0;
            for (int p = 0; p < n; ++p)
                for (int q2 = p + 1; q2 < n; ++q2) off += a[static_cast<std::size_t>(p * n + q2)] * a[static_cast<std::size_t>(p * n + q2)];
            if (off < 1e-30) break;
            for (int p = 0; p < n; ++p)
                for (int q2 = p + 1; q2 < n; ++q2) {
                    const double apq = a[static_cast<std::size_t>(p * n + q2)];
                    if (std::abs(apq) < 1e-300) continue;
                    const double zeta = (a[static_cast<std::size_t>(q2 * n + q2)] - a[static_cast<std::size_t>(p * n + p)]) / (2.0 * apq);
                    const double sgn = zeta >= 0.0 ? 1.0 : -1.0;
                    const double t = sgn / (std::abs(zeta) + std::hypot(1.0, zeta));
                    const double c = 1.0 / std::hypot(1.0, t);
                    const double s = t * c;
                    for (int i = 0; i < n; ++i) {
                        const double aip = a[static_cast<std::size_t>(i * n + p)], aiq = a[static_cast<std::size_t>(i * n + q2)];
                        a[static_cast<std::size_t>(i * n + p)] = c * aip - s * aiq;
                        a[static_cast<std::size_t>(i * n + q2)] = s * aip + c * aiq;
                    }
                    for (int j = 0; j < n; ++j) {
                        const double apj = a[static_cast<std::size_t>(p * n + j)], aqj = a[static_cast<std::size_t>(q2 * n + j)];
                        a[static_cast<std::size_t>(p * n + j)] = c * apj - s * aqj;
                        a[static_cast<std::size_t>(q2 * n + j)] = s * apj + c * aqj;
                    }
                }
        }
        double mn = a[0];
        for (int i = 1; i < n; ++i) mn = std::min(mn, a[static_cast<std::size_t>(i * n + i)]);
        return mn;
    }
};

inline double volume_element(const MetricTensor& g) { return g.volume_element(); }

namespace detail {

/// Stable radial combinations of L = log((1+r)/(1-r)). Each has a leading
/// cancellation at r = 0, replaced by its Taylor series there:
///   alpha = 2r - (1-r^2) L = sum_{k odd >= 3} 4 r^k / (k (k-2))
///   gamma = L - 2r         = sum_{k odd >= 3} 2 r^k / k
///   delta = (1-r^2) L^2 + 2 r L - 8 r^2  (leading term (8/45) r^6)
inline double radial_alpha(double r) {
    if (r < 0.05) {
        double s = 0.0, rk = r * r * r;
        for (int k = 3; k <= 13; k += 2) {
            s += 4.0 * rk / (static_cast<double>(k) * static_cast<double>(k - 2));
            rk *= r * r;
        }
        return s;
    }
    return 2.0 * r - (1.0 - r * r) * log_inv_w(r);
}

inline double radial_gamma(double r) {
    if (r < 0.05) {
        double s = 0.0, rk = r * r * r;
        for (int k = 3; k <= 13; k += 2) {
            s += 2.0 * rk / static_cast<double>(k);
            rk *= r * r;
        }
        return s;
    }
    return log_inv_w(r) - 2.0 * r;
}

inline double radial_delta(double r) {
    if (r < 0.15) {
        // coefficients of r^6..r^22 (even powers) in (1-r^2)L^2 + 2rL - 8r^2
        static constexpr double c[] = {8.0 / 45.0,
                                       64.0 / 315.0,
                                       104.0 / 525.0,
                                       9664.0 / 51975.0,
                                       163432.0 / 945945.0,
                                       10112.0 / 63063.0,
                                       1027688.0 / 6891885.0,
                                       91077248.0 / 654729075.0,
                                       104204648.0 / 800224425.0};
        double s = 0.0, rk = r * r * r * r * r * r;
        for (double ck : c) {
            s += ck * rk;
            rk *= r * r;
        }
        return s;
    }
    const double L = log_inv_w(r);
    return (1.0 - r * r) * L * L + 2.0 * r * L - 8.0 * r * r;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Closed-form metric catalog
// ---------------------------------------------------------------------------

/// Bures metric of the Bloch family: (1/4)(dr^2/(1-r^2) + dn^2) with
/// dn^2 = r^2 dtheta1^2 + r^2 sin^2(theta1) dtheta2^2.
inline MetricTensor bures_bloch_closed(const BlochPoint& p) {
    validate(p);
    if (p.r >= 1.0) throw std::domain_error("bures_bloch_closed: r = 1 is a coordinate singularity");
    MetricTensor m = MetricTensor::zero({"r", "theta1", "theta2"});
    const double s1 = std::sin(p.theta1);
    m.at(0, 0) = 0.25 / (1.0 - p.r * p.r);
    m.at(1, 1) = 0.25 * p.r * p.r;
    m.at(2, 2) = 0.25 * p.r * p.r * s1 * s1;
    return m;
}

/// q-extended Bures metric over (q, r, theta1, theta2). In terms of the
/// escort polarization tau = tanh(q atanh r):
///   g_qq = L^2 (1-tau^2)/16,  g_qr = q L (1-tau^2) / (8 (1-r^2))  [half the
///   printed cross coefficient], g_rr = q^2 (1-tau^2)/(4 (1-r^2)^2),
///   tangential coefficient tau^2/(4 r^2).
/// The (q,r) block is rank one, so the untruncated determinant vanishes
/// identically; truncated=true zeroes the cross entry.
inline MetricTensor bures_extended_closed(const EscortPoint& p, bool truncated,
                                          double q_floor = kDefaultQFloor) {
    validate(p, q_floor);
    const double r = p.base.r;
    if (!(r > 0.0 && r < 1.0)) throw std::domain_error("bures_extended_closed: r must lie strictly in (0,1)");
    const double L = log_inv_w(r);
    const double tau = escort_polarization(p.q, r);
    const double omt = 1.0 - tau * tau;
    const double s1 = std::sin(p.base.theta1);
    MetricTensor m = MetricTensor::zero({"q", "r", "theta1", "theta2"});
    m.at(0, 0) = L * L * omt / 16.0;
    m.at(1, 1) = p.q * p.q * omt / (4.0 * (1.0 - r * r) * (1.0 - r * r));
    if (!truncated) {
        m.at(0, 1) = m.at(1, 0) = p.q * L * omt / (8.0 * (1.0 - r * r));
    }
    const double tang = tau * tau / (4.0 * r * r);
    m.at(2, 2) = tang * r * r;
    m.at(3, 3) = tang * r * r * s1 * s1;
    return m;
}

/// Fisher information metric of the Husimi family (q = 1, 3D):
///   g_rr = gamma/(2 r^3), tangential coefficient alpha/(4 r^3).
inline MetricTensor fisher_husimi_closed(const BlochPoint& p) {
    validate(p);
    if (!(p.r > 0.0 && p.r < 1.0)) throw std::domain_error("fisher_husimi_closed: r must lie strictly in (0,1)");
    MetricTensor m = MetricTensor::zero({"r", "theta1", "theta2"});
    const double r = p.r, s1 = std::sin(p.theta1);
    const double tang = detail::radial_alpha(r) / (4.0 * r * r * r);
    m.at(0, 0) = detail::radial_gamma(r) / (2.0 * r * r * r);
    m.at(1, 1) = tang * r * r;
    m.at(2, 2) = tang * r * r * s1 * s1;
    return m;
}

/// q-extended Fisher metric of the Husimi family at q = 1 (4D, not truncated):
///   g_qq = alpha (4r - alpha)/(16 r^2), g_qr = alpha/(4 r^2) [half printed],
///   radial/tangential as in the 3D form. The (q,r)-block determinant is
///   alpha delta / (32 r^5), leading term r^4/135.
inline MetricTensor fisher_husimi_extended_q1_closed(const BlochPoint& p) {
    validate(p);
    if (!(p.r > 0.0 && p.r < 1.0))
        throw std::domain_error("fisher_husimi_extended_q1_closed: r must lie strictly in (0,1)");
    MetricTensor m = MetricTensor::zero({"q", "r", "theta1", "theta2"});
    const double r = p.r, s1 = std::sin(p.theta1);
    const double a = detail::radial_alpha(r);
    const double tang = a / (4.0 * r * r * r);
    m.at(0, 0) = a * (4.0 * r - a) / (16.0 * r * r);
    m.at(0, 1) = m.at(1, 0) = a / (4.0 * r * r);
    m.at(1, 1) = detail::radial_gamma(r) / (2.0 * r * r * r);
    m.at(2, 2) = tang * r * r;
    m.at(3, 3) = tang * r * r * s1 * s1;
    return m;
}

/// (q,r)-block determinant of the q = 1 extended Husimi metric, stable down
/// to r = 0 where it behaves as r^4/135.
inline double fisher_husimi_q1_block_det(double r) {
    return detail::radial_alpha(r) * detail::radial_delta(r) / (32.0 * std::pow(r, 5));
}

/// Bures metric of the 3x3 spin-1 family over (v, r, theta1, theta2).
/// The cross entry is g_vr = r/(4 (r^2 - v^2)) as printed, NOT halved: the
/// finite-difference metric computed from the family itself fixes the
/// convention (halving it disagrees with d^2_B by a factor 2 in that entry).
inline MetricTensor spin1_bures_closed(const SpinOneFamilyPoint& p) {
    validate(p);
    if (!(p.r > 0.0 && p.r < p.v && p.v < 1.0))
        throw std::domain_error("spin1_bures_closed: requires 0 < r < v < 1");
    MetricTensor m = MetricTensor::zero({"v", "r", "theta1", "theta2"});
    const double v = p.v, r = p.r, s1 = std::sin(p.theta1);
    m.at(0, 0) = 0.25 * (r * r - v) / ((1.0 - v) * (r * r - v * v));
    m.at(0, 1) = m.at(1, 0) = 0.25 * r / (r * r - v * v);
    m.at(1, 1) = 0.25 * v / (v * v - r * r);
    m.at(2, 2) = 0.25 * r * r / v;
    m.at(3, 3) = 0.25 * r * r * s1 * s1 / v;
    return m;
}

/// Tangential (dn^2) coefficient of the five-parameter q-extension of the
/// spin-1 Bures metric; reduces to 1/(4v) at q = 1.
inline double spin1_qext_tangential(const SpinOneFamilyPoint& p, double q) {
    validate(p);
    if (!(p.r > 0.0)) throw std::domain_error("spin1_qext_tangential: r must be > 0");
    const double A = std::pow(p.v - p.r, q), B = std::pow(p.v + p.r, q), C = std::pow(2.0 - 2.0 * p.v, q);
    return (A - B) * (A - B) / (4.0 * p.r * p.r * (A + B) * (C + A + B));
}

/// Bell-CHSH (q = 1) metric over (q, b_q, sigma_q^2), entries as printed.
/// Its determinant vanishes identically: the q-row is the Schur image of the
/// (b, sigma^2) block, which the acceptance suite checks numerically.
inline MetricTensor aberaj_metric_q1(const AbeRajPoint& p) {
    validate(p);
    const double b = p.b_q, S = p.sigma_q2;
    const double s2 = std::sqrt(2.0);
    const double arg1 = S - 2.0 * s2 * b, arg2 = S + 2.0 * s2 * b, arg3 = 8.0 - S;
    if (!(arg1 > 0.0 && arg2 > 0.0 && arg3 > 0.0)) throw std::domain_error("aberaj_metric_q1: log argument <= 0");
    const double L1 = std::log(arg1), L2 = std::log(arg2), L3 = std::log(arg3);

    const double c = -4.0 * L3 * L3 * S * (S - 8.0) + 2.0 * L1 * L2 * (8.0 * b * b - S * S) -
                     L1 * L1 * (8.0 * b * b + S * (S - 16.0) - 4.0 * s2 * b * (S - 8.0)) -
                     L2 * L2 * (8.0 * b * b + S * (S - 16.0) + 4.0 * s2 * b * (S - 8.0)) +
                     4.0 * L3 * (S - 8.0) * (L1 * (S - 2.0 * s2 * b) + L2 * (S + 2.0 * s2 * b));

    MetricTensor m = MetricTensor::zero({"q", "b_q", "sigma_q2"});
    m.at(0, 0) = c / 1024.0;
    m.at(0, 1) = m.at(1, 0) = 0.5 * (L1 - L2) / (8.0 * s2);
    m.at(0, 2) = m.at(2, 0) = 0.5 * (2.0 * L3 - L1 - L2) / 32.0;
    m.at(1, 1) = S / (4.0 * (S * S - 8.0 * b * b));
    m.at(1, 2) = m.at(2, 1) = 0.5 * b / (16.0 * b * b - 2.0 * S * S);
    m.at(2, 2) = (b * b - S) / (4.0 * (S - 8.0) * (S * S - 8.0 * b * b));
    return m;
}

/// Volume element of the (b_q, sigma_q^2) sub-block in closed form, with the
/// dimensionally consistent (-8 + sigma_q^2) reading.
inline double aberaj_subblock_volume(const AbeRajPoint& p) {
    validate(p);
    const double b = p.b_q, S = p.sigma_q2;
    return 0.25 * std::sqrt(-1.0 / ((S - 8.0) * (S * S - 8.0 * b * b)));
}

// ---------------------------------------------------------------------------
// Numeric engines
// ---------------------------------------------------------------------------

/// Bures distance d^2 = 2 - 2 tr (rho1^{1/2} rho2 rho1^{1/2})^{1/2}.
inline double bures_distance(const HermitianMatrix& rho1, const HermitianMatrix& rho2) {
    if (rho1.dim != rho2.dim) throw std::invalid_argument("bures_distance: dimension mismatch");
    HermitianMatrix s = matrix_power(rho1, 0.5);  // throws on non-PSD
    HermitianMatrix inner = matmul(matmul(s, rho2), s);
    EigenSystem es = eigh(inner);
    double tr_sqrt = 0.0;
    for (int k = 0; k < inner.dim; ++k) {
        double lam = es.eigenvalues[static_cast<std::size_t>(k)];
        if (lam < -1e-12) throw std::domain_error("bures_distance: non-PSD input");
        tr_sqrt += std::sqrt(std::max(lam, 0.0));
    }
    return std::sqrt(std::max(2.0 - 2.0 * tr_sqrt, 0.0));
}

/// Numeric Bures metric from Hubner's eigenbasis sum with central
/// finite-difference derivatives of the family map,
///   g_ab = sum_ij Re( <i|d_a rho|j> conj(<i|d_b rho|j>) ) / (2 (l_i + l_j)).
/// Degenerate eigenvalues are harmless: the sum only divides by l_i + l_j.
inline MetricTensor hubner_metric(const DensityFamily& fam, std::span<const double> params,
                                  double step = 1e-5) {
    const int n = static_cast<int>(params.size());
    if (n != static_cast<int>(fam.labels.size()))
        throw std::invalid_argument("hubner_metric: parameter count does not match family");

    const HermitianMatrix rho0 = fam.rho(params);
    const EigenSystem es = eigh(rho0);
    const int md = rho0.dim;
    if (es.eigenvalues[0] <= 1e-10)
        throw std::domain_error("hubner_metric: eigenvalue " + std::to_string(es.eigenvalues[0]) +
                                " too close to zero; formula divides by l_i + l_j");

    std::vector<double> x(params.begin(), params.end());
    // derivatives in the eigenbasis of rho0
    std::vector<std::array<complexd, 16>> dbasis(static_cast<std::size_t>(n));
    for (int a = 0; a < n; ++a) {
        const double h = step * std::max(std::abs(x[static_cast<std::size_t>(a)]), 1.0);
        std::vector<double> xp = x, xm = x;
        xp[static_cast<std::size_t>(a)] += h;
        xm[static_cast<std::size_t>(a)] -= h;
        const HermitianMatrix dp = fam.rho(xp);
        const HermitianMatrix dm = fam.rho(xm);
        for (int i = 0; i < md; ++i)
            for (int j = 0; j < md; ++j) {
                complexd s{};
                for (int k = 0; k < md; ++k)
                    for (int l = 0; l < md; ++l)
                        s += std::conj(es.vec(k, i)) * ((dp.at(k, l) - dm.at(k, l)) / (2.0 * h)) * es.vec(l, j);
                dbasis[static_cast<std::size_t>(a)][static_cast<std::size_t>(i * md + j)] = s;
            }
    }

    MetricTensor m = MetricTensor::zero(fam.labels);
    for (int a = 0; a < n; ++a)
        for (int b = a; b < n; ++b) {
            double s = 0.0;
            for (int i = 0; i < md; ++i)
                for (int j = 0; j < md; ++j) {
                    const complexd da = dbasis[static_cast<std::size_t>(a)][static_cast<std::size_t>(i * md + j)];
                    const complexd db = dbasis[static_cast<std::size_t>(b)][static_cast<std::size_t>(i * md + j)];
                    s += (da * std::conj(db)).real() /
                         (2.0 * (es.eigenvalues[static_cast<std::size_t>(i)] + es.eigenvalues[static_cast<std::size_t>(j)]));
                }
            m.at(a, b) = m.at(b, a) = s;
        }
    return m;
}

/// hubner_metric with one Richardson step: g = (4 g_{h/2} - g_h)/3, killing
/// the O(h^2) truncation term.
inline MetricTensor hubner_metric_refined(const DensityFamily& fam, std::span<const double> params,
                                          double step = 1e-4) {
    MetricTensor gh = hubner_metric(fam, params, step);
    MetricTensor gh2 = hubner_metric(fam, params, 0.5 * step);
    MetricTensor out = gh2;
    for (int i = 0; i < out.dim * out.dim; ++i)
        out.g[static_cast<std::size_t>(i)] = (4.0 * gh2.g[static_cast<std::size_t>(i)] - gh.g[static_cast<std::size_t>(i)]) / 3.0;
    return out;
}

/// Fisher information metric of the escort Husimi family over
/// (q, r, theta1, theta2). The (q,r) block comes from 1D integrals in
/// c = cos(gamma); the angular block is the closed tangential form
/// ((1+r) f_F_q(W))^{-1}.
inline MetricTensor fisher_numeric(const EscortPoint& p, double rel_tol = 1e-10,
                                   double q_floor = kDefaultQFloor) {
    validate(p, q_floor);
    const double q = p.q, r = p.base.r;
    if (!(r > 0.0 && r < 1.0)) throw std::domain_error("fisher_numeric: r must lie strictly in (0,1)");

    // Substitute v = 1 + r c (so H = v/2, dc = dv/r) and integrate on a log
    // axis in v: the spike the score functions develop at c = -1 as r -> 1
    // flattens into a smooth integrand over s = log v for every r in (0,1).
    IntegrationSpec spec = make_spec({Axis{1.0 - r, 1.0 + r, AxisTransform::log_scale}}, rel_tol, 1e-15);
    auto moment = [&](auto&& weight) {
        auto f = [&](std::span<const double> x) {
            const double v = x[0];
            const double lnh = std::log(v) - std::log(2.0);
            const double score = (v - 1.0) / (r * v);  // c/(2h) = d_r log H
            return std::exp(q * lnh) * weight(lnh, score) / r;
        };
        IntegrationResult res = integrate(f, spec);
        if (!res.converged)
            throw std::runtime_error("fisher_numeric: c-moment integral did not converge (evals=" +
                                     std::to_string(res.evals) + ", err=" + std::to_string(res.error_estimate) + ")");
        return res.value;
    };

    const double Z = moment([](double, double) { return 1.0; });
    const double M10 = moment([](double lnh, double) { return lnh; });
    const double M20 = moment([](double lnh, double) { return lnh * lnh; });
    const double M01 = moment([](double, double score) { return score; });
    const double M02 = moment([](double, double score) { return score * score; });
    const double M11 = moment([](double lnh, double score) { return lnh * score; });

    const double ex = M10 / Z;      // E[log H] = d_q log Z
    const double ey = q * M01 / Z;  // q E[c/(1+rc)] = d_r log Z
    MetricTensor m = MetricTensor::zero({"q", "r", "theta1", "theta2"});
    m.at(0, 0) = M20 / Z - ex * ex;
    m.at(0, 1) = m.at(1, 0) = q * M11 / Z - ex * ey;
    m.at(1, 1) = q * q * M02 / Z - ey * ey;

    const double tang = 1.0 / ((1.0 + r) * f_eval(FFunctionId::f_F_q, w_ratio(r), q));
    const double s1 = std::sin(p.base.theta1);
    m.at(2, 2) = tang * r * r;
    m.at(3, 3) = tang * r * r * s1 * s1;
    return m;
}

// ---------------------------------------------------------------------------
// Degeneracy scan
// ---------------------------------------------------------------------------

struct DegeneracyReport {
    int requested = 0;
    int evaluated = 0;
    double max_ratio = 0.0;  // max |det| / |prod diag|
    std::vector<double> argmax_point;
    bool degenerate = false;  // max_ratio below tolerance
    double tolerance = 1e-10;
};

/// Samples n points of the domain box (seeded, deterministic) and reports the
/// worst scale-free determinant ratio |det|/prod(diag).
inline DegeneracyReport degeneracy_scan(const std::function<MetricTensor(std::span<const double>)>& source,
                                        const std::vector<std::array<double, 2>>& box, int n,
                                        std::uint64_t seed = 12345, double tolerance = 1e-10) {
    if (n < 1) throw std::invalid_argument("degeneracy_scan: n must be >= 1");
    detail::SplitMix64 rng(seed);
    DegeneracyReport rep;
    rep.requested = n;
    rep.tolerance = tolerance;
    std::vector<double> x(box.size());
    int produced = 0;
    int attempts = 0;
    while (produced < n && attempts < 50 * n) {
        ++attempts;
        for (std::size_t k = 0; k < box.size(); ++k) x[k] = box[k][0] + (box[k][1] - box[k][0]) * rng.uniform();
        MetricTensor g;
        try {
            g = source(x);
        } catch (const std::domain_error&) {
            continue;  // point outside the family's domain (e.g. r > v); redraw
        }
        ++produced;
        const double ratio = std::abs(g.det()) / std::abs(g.diag_product());
        if (ratio >= rep.max_ratio) {
            rep.max_ratio = ratio;
            rep.argmax_point = x;
        }
    }
    rep.evaluated = produced;
    rep.degenerate = rep.max_ratio < tolerance;
    return rep;
}

}  // namespace qprior
