#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace qprior {

/// The operator-monotone-style functions appearing in the tangential metric
/// components, all taken at t = W = (1-r)/(1+r):
///   f_B(t)       = (1+t)/2                      (Bures, f_B(1) = 1)
///   f_bures_q(t) = 2 (1+t)(1+t^q)^2 / (1-t^q)^2 (q-extended Bures tangent)
///   f_F(t)       = (t-1)^3 / (t^2 - 2 t log t - 1)
///   f_F_q(t)     = (q-1)(t-1)^2 (t^{1+q}-1) /
///                  ( q (1+t)(1-q+t+qt-t^q-qt^q-t^{1+q}+qt^{1+q}) )
/// f_F and f_F_q cancel to third order at t = 1 and f_F_q is 0/0 at q = 1;
/// both get series branches. The q->1 limit of f_F_q is exactly f_F, and
/// f_F_q(1) = 3/q^2.
enum class FFunctionId { f_B, f_bures_q, f_F, f_F_q };

namespace detail {

inline double phi_expm1(double x) {  // expm1(x)/x with the x -> 0 limit
    if (std::abs(x) < 1e-8) return 1.0 + 0.5 * x;
    return std::expm1(x) / x;
}

/// Denominator of f_F_q divided by (q-1), uniformly stable in q:
///   D/(q-1) = expm1((1+q)L) - (1+q) t L phi((q-1)L),  L = log t.
inline double f_fq_reduced_denominator(double t, double q) {
    const double L = std::log(t);
    if (std::abs(L) < 1e-2) {
        // t near 1: both routes cancel to O(L^3); sum the exact series
        //   D/(q-1) = sum_{k>=3} L^k/k! * [ (1+q)^k - (1+q) sum_{j<k} q^j ]
        double sum = 0.0;
        double lk = L * L * L;        // L^k
        double fact = 6.0;            // k!
        double pk = (1.0 + q) * (1.0 + q) * (1.0 + q);  // (1+q)^k
        double geo = 1.0 + q + q * q;                   // sum_{j<k} q^j
        double qk = q * q * q;                          // q^k
        for (int k = 3; k <= 20; ++k) {
            sum += lk / fact * (pk - (1.0 + q) * geo);
            lk *= L;
            fact *= static_cast<double>(k + 1);
            pk *= (1.0 + q);
            geo += qk;
            qk *= q;
        }
        return sum;
    }
    return std::expm1((1.0 + q) * L) - (1.0 + q) * t * L * phi_expm1((q - 1.0) * L);
}

}  // namespace detail

inline double f_eval(FFunctionId id, double t, double q = 1.0) {
    if (!(t > 0.0 && t <= 1.0)) throw std::domain_error("f_eval: t must lie in (0,1]");
    switch (id) {
        case FFunctionId::f_B:
            return 0.5 * (1.0 + t);
        case FFunctionId::f_bures_q: {
            if (t == 1.0) throw std::domain_error("f_eval: f_bures_q diverges at t = 1");
            const double em = std::expm1(q * std::log(t));  // t^q - 1
            const double tq1 = 1.0 + em + 1.0;              // 1 + t^q
            return 2.0 * (1.0 + t) * tq1 * tq1 / (em * em);
        }
        case FFunctionId::f_F:
        case FFunctionId::f_F_q: {
            const double qq = (id == FFunctionId::f_F) ? 1.0 : q;
            if (t == 1.0) return 3.0 / (qq * qq);
            const double L = std::log(t);
            const double tm1 = std::expm1(L);            // t - 1
            const double t1q = std::expm1((1.0 + qq) * L);  // t^{1+q} - 1
            const double den = qq * (1.0 + t) * detail::f_fq_reduced_denominator(t, qq);
            return tm1 * tm1 * t1q / den;
        }
    }
    throw std::logic_error("unreachable");
}

}  // namespace qprior
