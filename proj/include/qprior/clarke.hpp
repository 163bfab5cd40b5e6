#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "qprior/bayes.hpp"
#include "qprior/priors.hpp"
#include "qprior/quadrature.hpp"

namespace qprior {

/// Thrown when the first density has mass where the second vanishes: the
/// relative entropy diverges and no number is reported.
struct SupportMismatchError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct KLResult {
    double value = 0.0;
    double error_estimate = 0.0;
    long evals = 0;
    bool converged = true;
};

/// Relative entropy S_KL(p || q) = int p log(p/q) in nats. Small negative
/// totals (within 1e-9 of zero) are clamped to 0.
inline KLResult kl(const PriorDensity& p, const PriorDensity& q, double rel_tol = 1e-7) {
    if (p.dim() != q.dim()) throw std::invalid_argument("kl: dimension mismatch");
    auto pd = p.density;
    auto qd = q.density;
    auto integrand = [&](std::span<const double> x) {
        const double pv = pd(x);
        if (pv <= 1e-300) return 0.0;
        const double qv = qd(x);
        if (qv <= 0.0) {
            std::string pt;
            for (double c : x) pt += (pt.empty() ? "" : ",") + std::to_string(c);
            throw SupportMismatchError("kl: first argument has mass where second vanishes at (" + pt + ")");
        }
        return pv * std::log(pv / qv);
    };
    IntegrationResult res = integrate(integrand, domain_spec(p, rel_tol));
    KLResult out{res.value, res.error_estimate, res.evals, res.converged};
    if (out.value < 0.0 && out.value > -1e-9) out.value = 0.0;
    return out;
}

enum class Verdict { first_more_noninformative, second_more_noninformative, inconclusive };

inline const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::first_more_noninformative: return "first_more_noninformative";
        case Verdict::second_more_noninformative: return "second_more_noninformative";
        case Verdict::inconclusive: return "inconclusive";
    }
    return "?";
}

/// Directional statistics of the comparative noninformativity test for one
/// ordered pair. Both posterior stages are always computed; the verdict uses
/// the stage at the test spec's power (the square-root stage by default).
struct ClarkeVerdict {
    std::string first, second;
    double s12 = 0.0, s21 = 0.0;                  // prior-prior, both directions
    double s12_post_pow1 = 0.0, s21_post_pow1 = 0.0;  // power-1 posteriors
    double s12_post = 0.0, s21_post = 0.0;        // verdict-stage posteriors
    double verdict_power = 0.5;
    Verdict verdict = Verdict::inconclusive;
};

namespace detail {

inline Verdict decide(double s12, double s21, double p12, double p21) {
    const bool first = p12 < s12 && p21 > s21;
    const bool second = p12 > s12 && p21 < s21;
    if (first && !second) return Verdict::first_more_noninformative;
    if (second && !first) return Verdict::second_more_noninformative;
    return Verdict::inconclusive;
}

}  // namespace detail

/// Clarke's comparative noninformativity test: the prior that moves closer to
/// the other on conditioning (while the reverse statistic grows) is the more
/// noninformative one.
inline ClarkeVerdict clarke_compare(const PriorDensity& p1, const PriorDensity& p2,
                                    const MeasurementSpec& testspec = MeasurementSpec::three_pairs(0.5),
                                    double rel_tol = 1e-7) {
    validate(testspec);
    ClarkeVerdict v;
    v.first = p1.name;
    v.second = p2.name;
    v.verdict_power = testspec.power;
    v.s12 = kl(p1, p2, rel_tol).value;
    v.s21 = kl(p2, p1, rel_tol).value;

    auto stage = [&](double power, double& out12, double& out21) {
        MeasurementSpec s = testspec;
        s.power = power;
        const LikelihoodField like = (p1.dim() == 4) ? likelihood_q(s) : likelihood(s);
        out12 = kl(posterior(p1, like, rel_tol), p2, rel_tol).value;
        out21 = kl(posterior(p2, like, rel_tol), p1, rel_tol).value;
    };

    stage(1.0, v.s12_post_pow1, v.s21_post_pow1);
    if (testspec.power == 1.0) {
        v.s12_post = v.s12_post_pow1;
        v.s21_post = v.s21_post_pow1;
    } else {
        stage(testspec.power, v.s12_post, v.s21_post);
    }
    v.verdict = detail::decide(v.s12, v.s21, v.s12_post, v.s21_post);
    return v;
}

/// Pairwise verdict matrix plus the induced total order when one exists.
struct RankingReport {
    std::vector<std::string> names;
    std::vector<ClarkeVerdict> pairs;      // all unordered pairs, i < j order
    std::vector<int> order;                // indices, most noninformative first
    bool total_order = false;
    bool transitive = false;
    bool any_inconclusive = false;
};

inline RankingReport rank(const std::vector<PriorDensity>& priors,
                          const MeasurementSpec& testspec = MeasurementSpec::three_pairs(0.5),
                          double rel_tol = 1e-7) {
    const int n = static_cast<int>(priors.size());
    if (n < 2) throw std::invalid_argument("rank: need at least two priors");
    RankingReport rep;
    for (const auto& p : priors) rep.names.push_back(p.name);

    // beats[i][j]: i strictly more noninformative than j
    std::vector<std::vector<bool>> beats(static_cast<std::size_t>(n), std::vector<bool>(static_cast<std::size_t>(n), false));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            ClarkeVerdict v = clarke_compare(priors[static_cast<std::size_t>(i)], priors[static_cast<std::size_t>(j)], testspec, rel_tol);
            if (v.verdict == Verdict::first_more_noninformative)
                beats[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = true;
            else if (v.verdict == Verdict::second_more_noninformative)
                beats[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = true;
            else
                rep.any_inconclusive = true;
            rep.pairs.push_back(std::move(v));
        }

    // transitivity of the conclusive part: no i -> j -> k without i -> k
    rep.transitive = true;
    for (int i = 0; i < n && rep.transitive; ++i)
        for (int j = 0; j < n && rep.transitive; ++j)
            for (int k = 0; k < n; ++k)
                if (beats[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] &&
                    beats[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)] &&
                    !beats[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)]) {
                    rep.transitive = false;
                    break;
                }

    if (!rep.any_inconclusive && rep.transitive) {
        std::vector<int> idx(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) idx[static_cast<std::size_t>(i)] = i;
        std::sort(idx.begin(), idx.end(), [&](int a, int b) {
            int wa = 0, wb = 0;
            for (int k = 0; k < n; ++k) {
                wa += beats[static_cast<std::size_t>(a)][static_cast<std::size_t>(k)] ? 1 : 0;
                wb += beats[static_cast<std::size_t>(b)][static_cast<std::size_t>(k)] ? 1 : 0;
            }
            if (wa != wb) return wa > wb;
            return a < b;
        });
        // a strict total order needs distinct win counts 0..n-1
        bool strict = true;
        for (int i = 0; i + 1 < n; ++i) {
            const int a = idx[static_cast<std::size_t>(i)], b = idx[static_cast<std::size_t>(i + 1)];
            if (!beats[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)]) strict = false;
        }
        rep.total_order = strict;
        if (strict) rep.order = idx;
    }
    return rep;
}

}  // namespace qprior
