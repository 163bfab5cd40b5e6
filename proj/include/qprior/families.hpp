#pragma once

#include <cmath>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "qprior/linalg.hpp"

namespace qprior {

inline constexpr double kDefaultQFloor = 0.5;

/// log(1/W) = log((1+r)/(1-r)) = 2 atanh r, stable down to r = 0.
inline double log_inv_w(double r) { return std::log1p(r) - std::log1p(-r); }

/// W = (1-r)/(1+r), the ratio of the two Bloch eigenvalues.
inline double w_ratio(double r) { return (1.0 - r) / (1.0 + r); }

/// Escort polarization tau(q, r) = (1 - W^q)/(1 + W^q) = tanh(q atanh r).
/// This is the Bloch-vector length of the escort state; tau(1, r) = r.
inline double escort_polarization(double q, double r) { return std::tanh(q * std::atanh(r)); }

/// a(q,r) = tau/r, the factor scaling measured spin expectations in the
/// escort family; a(q, 0) = q by the series limit.
inline double escort_axis_scale(double q, double r) {
    if (r < 1e-10) return q * (1.0 + (1.0 - q * q) * r * r / 3.0);
    return escort_polarization(q, r) / r;
}

struct BlochPoint {
    double r = 0.0;
    double theta1 = 0.0;
    double theta2 = 0.0;
};

inline void validate(const BlochPoint& p) {
    if (!(p.r >= 0.0 && p.r <= 1.0)) throw std::domain_error("BlochPoint: r must lie in [0,1]");
    if (!(p.theta1 >= 0.0 && p.theta1 <= 3.14159265358979323846 + 1e-12))
        throw std::domain_error("BlochPoint: theta1 must lie in [0,pi]");
}

/// Cartesian coordinates x = r cos(t1), y = r sin(t1) cos(t2), z = r sin(t1) sin(t2).
struct Cartesian {
    double x, y, z;
};

inline Cartesian to_cartesian(const BlochPoint& p) {
    const double s1 = std::sin(p.theta1);
    return {p.r * std::cos(p.theta1), p.r * s1 * std::cos(p.theta2), p.r * s1 * std::sin(p.theta2)};
}

struct EscortPoint {
    BlochPoint base;
    double q = 1.0;
};

inline void validate(const EscortPoint& p, double q_floor = kDefaultQFloor) {
    validate(p.base);
    if (!(p.q >= q_floor)) throw std::domain_error("EscortPoint: q below the configured floor");
}

struct SpinOneFamilyPoint {
    double v = 1.0;
    double r = 0.0;
    double theta1 = 0.0;
    double theta2 = 0.0;
};

inline void validate(const SpinOneFamilyPoint& p) {
    if (!(p.v >= 0.0 && p.v <= 1.0)) throw std::domain_error("SpinOneFamilyPoint: v must lie in [0,1]");
    if (!(p.r >= 0.0 && p.r <= p.v)) throw std::domain_error("SpinOneFamilyPoint: requires 0 <= r <= v");
}

/// Parameters of the q=1 Bell-CHSH metric: q-expectation b_q and dispersion
/// sigma_q^2, restricted to the region where every log argument is positive.
struct AbeRajPoint {
    double b_q = 0.0;
    double sigma_q2 = 4.0;
};

inline void validate(const AbeRajPoint& p) {
    const double s = p.sigma_q2;
    if (!(s < 8.0)) throw std::domain_error("AbeRajPoint: sigma_q^2 must be < 8");
    if (!(s * s > 8.0 * p.b_q * p.b_q) || !(s > 2.0 * std::sqrt(2.0) * std::abs(p.b_q)))
        throw std::domain_error("AbeRajPoint: sigma_q^2 must exceed 2 sqrt(2) |b_q|");
}

/// rho = (1/2) [[1+z, x-iy],[x+iy, 1-z]]; eigenvalues (1 +/- r)/2.
inline HermitianMatrix bloch_rho(const BlochPoint& p) {
    validate(p);
    const Cartesian c = to_cartesian(p);
    HermitianMatrix m = HermitianMatrix::zero(2);
    m.at(0, 0) = 0.5 * (1.0 + c.z);
    m.at(1, 1) = 0.5 * (1.0 - c.z);
    m.at(0, 1) = complexd{0.5 * c.x, -0.5 * c.y};
    m.at(1, 0) = std::conj(m.at(0, 1));
    return m;
}

/// Escort state (2 rho)^q / ((1-r)^q + (1+r)^q); q = 1 recovers bloch_rho.
inline HermitianMatrix escort_rho(const EscortPoint& p, double q_floor = kDefaultQFloor) {
    validate(p, q_floor);
    if (p.base.r == 1.0 && p.q < 1.0) throw std::domain_error("escort_rho: r = 1 with q < 1 is singular");
    HermitianMatrix m2 = bloch_rho(p.base) * 2.0;
    HermitianMatrix mq = matrix_power(m2, p.q);
    const double norm = std::pow(1.0 - p.base.r, p.q) + std::pow(1.0 + p.base.r, p.q);
    return mq * (1.0 / norm);
}

/// 3x3 spin-1 family with extra parameter v; eigenvalues (v +/- r)/2 and 1-v.
inline HermitianMatrix spin1_rho(const SpinOneFamilyPoint& p) {
    validate(p);
    const Cartesian c = to_cartesian({p.r, p.theta1, p.theta2});
    HermitianMatrix m = HermitianMatrix::zero(3);
    m.at(0, 0) = 0.5 * (p.v + c.z);
    m.at(1, 1) = 1.0 - p.v;
    m.at(2, 2) = 0.5 * (p.v - c.z);
    m.at(0, 2) = complexd{0.5 * c.x, -0.5 * c.y};
    m.at(2, 0) = std::conj(m.at(0, 2));
    return m;
}

/// Escort of the spin-1 family: (2 rho)^q / tr (2 rho)^q.
inline HermitianMatrix spin1_escort_rho(const SpinOneFamilyPoint& p, double q) {
    validate(p);
    HermitianMatrix m2 = spin1_rho(p) * 2.0;
    HermitianMatrix mq = matrix_power(m2, q);
    return mq * (1.0 / trace(mq));
}

/// Husimi value H = (1 + r c)/2 at cos(gamma) = c, under the measure
/// dmu = dOmega/(2 pi) for which integral H dmu = 1.
inline double husimi_value(const BlochPoint& p, double c) {
    if (!(c >= -1.0 && c <= 1.0)) throw std::domain_error("husimi_value: c must lie in [-1,1]");
    validate(p);
    return 0.5 * (1.0 + p.r * c);
}

/// Normalization integral Z(q,r) = int_{-1}^{1} H^q dc, in closed form.
inline double escort_husimi_norm(double q, double r) {
    if (r < 1e-12) return std::pow(0.5, q) * 2.0;  // H == 1/2
    const double p1 = std::pow(1.0 + r, q + 1.0), m1 = std::pow(1.0 - r, q + 1.0);
    return (p1 - m1) / (std::pow(2.0, q) * r * (q + 1.0));
}

/// Ratio of the printed prefactor 2 r (1+q) / ((1+r)^{1+q} - (1-r)^{1+q}) to the
/// self-normalizing constant 1/Z: equals 2^{1-q} exactly; reported so the
/// power-of-two measure convention stays visible.
inline double escort_husimi_prefactor_ratio(double q) { return std::pow(2.0, 1.0 - q); }

/// Escort Husimi H_q = H^q / Z(q, r), normalized so int H_q dmu = 1.
inline double escort_husimi_value(const EscortPoint& p, double c, double q_floor = kDefaultQFloor) {
    if (!(c >= -1.0 && c <= 1.0)) throw std::domain_error("escort_husimi_value: c must lie in [-1,1]");
    validate(p, q_floor);
    const double h = 0.5 * (1.0 + p.base.r * c);
    return std::pow(h, p.q) / escort_husimi_norm(p.q, p.base.r);
}

/// A parameterized density-matrix family as consumed by the numeric metric
/// engine and the degeneracy scans.
struct DensityFamily {
    std::string name;
    std::vector<std::string> labels;
    std::vector<std::array<double, 2>> box;  // sampling box for scans (interior)
    std::function<HermitianMatrix(std::span<const double>)> rho;
};

inline DensityFamily bloch_family() {
    return {"bloch",
            {"r", "theta1", "theta2"},
            {{0.05, 0.95}, {0.2, 2.9}, {0.0, 6.28}},
            [](std::span<const double> x) { return bloch_rho({x[0], x[1], x[2]}); }};
}

inline DensityFamily escort_family() {
    return {"escort",
            {"q", "r", "theta1", "theta2"},
            {{0.55, 5.0}, {0.05, 0.95}, {0.2, 2.9}, {0.0, 6.28}},
            [](std::span<const double> x) { return escort_rho({{x[1], x[2], x[3]}, x[0]}); }};
}

inline DensityFamily spin1_family() {
    return {"spin1",
            {"v", "r", "theta1", "theta2"},
            {{0.3, 0.95}, {0.05, 0.9}, {0.2, 2.9}, {0.0, 6.28}},
            [](std::span<const double> x) {
                if (x[1] > x[0]) throw std::domain_error("spin1 family: r > v");
                return spin1_rho({x[0], x[1], x[2], x[3]});
            }};
}

/// Five-parameter escort extension (q, v, r, theta1, theta2) of the spin-1
/// family; its Bures volume element is expected to vanish identically.
inline DensityFamily spin1_escort_family() {
    return {"spin1q",
            {"q", "v", "r", "theta1", "theta2"},
            {{0.55, 3.0}, {0.3, 0.95}, {0.05, 0.9}, {0.2, 2.9}, {0.0, 6.28}},
            [](std::span<const double> x) {
                if (x[2] > x[1]) throw std::domain_error("spin1 escort family: r > v");
                return spin1_escort_rho({x[1], x[2], x[3], x[4]}, x[0]);
            }};
}

}  // namespace qprior
