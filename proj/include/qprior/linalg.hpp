#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>

namespace qprior {

using complexd = std::complex<double>;

/// Small dense complex Hermitian matrix, dimension 2..4, row-major storage.
///
/// Hermiticity (entries[i][j] == conj(entries[j][i]) within 1e-12) is checked
/// on construction via make_hermitian(); the cheap constructors used by the
/// density families build exactly Hermitian data directly.
struct HermitianMatrix {
    int dim = 2;
    std::array<complexd, 16> e{};

    complexd& at(int i, int j) { return e[static_cast<std::size_t>(i * dim + j)]; }
    const complexd& at(int i, int j) const { return e[static_cast<std::size_t>(i * dim + j)]; }

    static HermitianMatrix zero(int n) {
        if (n < 2 || n > 4) throw std::invalid_argument("HermitianMatrix: dim must be in 2..4");
        HermitianMatrix m;
        m.dim = n;
        return m;
    }

    static HermitianMatrix identity(int n) {
        HermitianMatrix m = zero(n);
        for (int i = 0; i < n; ++i) m.at(i, i) = 1.0;
        return m;
    }
};

inline constexpr double kHermitianTol = 1e-12;

/// Validates Hermiticity and returns the matrix; names the offending entry
/// pair on failure.
inline HermitianMatrix make_hermitian(int dim, std::span<const complexd> entries) {
    HermitianMatrix m = HermitianMatrix::zero(dim);
    if (entries.size() != static_cast<std::size_t>(dim * dim))
        throw std::invalid_argument("make_hermitian: entry count does not match dim");
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) m.at(i, j) = entries[static_cast<std::size_t>(i * dim + j)];
    for (int i = 0; i < dim; ++i) {
        for (int j = i; j < dim; ++j) {
            const complexd d = m.at(i, j) - std::conj(m.at(j, i));
            if (std::abs(d) > kHermitianTol)
                throw std::invalid_argument("make_hermitian: entries (" + std::to_string(i) + "," +
                                            std::to_string(j) + ") and (" + std::to_string(j) + "," +
                                            std::to_string(i) + ") are not conjugate");
        }
    }
    return m;
}

inline double trace(const HermitianMatrix& m) {
    double t = 0.0;
    for (int i = 0; i < m.dim; ++i) t += m.at(i, i).real();
    return t;
}

inline double frobenius_distance(const HermitianMatrix& a, const HermitianMatrix& b) {
    if (a.dim != b.dim) throw std::invalid_argument("frobenius_distance: dimension mismatch");
    double s = 0.0;
    for (int i = 0; i < a.dim * a.dim; ++i) s += std::norm(a.e[static_cast<std::size_t>(i)] - b.e[static_cast<std::size_t>(i)]);
    return std::sqrt(s);
}

inline HermitianMatrix operator-(const HermitianMatrix& a, const HermitianMatrix& b) {
    if (a.dim != b.dim) throw std::invalid_argument("HermitianMatrix: dimension mismatch");
    HermitianMatrix r = a;
    for (int i = 0; i < a.dim * a.dim; ++i) r.e[static_cast<std::size_t>(i)] -= b.e[static_cast<std::size_t>(i)];
    return r;
}

inline HermitianMatrix operator*(const HermitianMatrix& a, double s) {
    HermitianMatrix r = a;
    for (auto& x : r.e) x *= s;
    return r;
}

/// General (non-Hermitian-safe) product of two square matrices of equal dim.
/// Result is only tagged Hermitian when it mathematically is; callers from
/// bures_distance use symmetric sandwich products.
inline HermitianMatrix matmul(const HermitianMatrix& a, const HermitianMatrix& b) {
    if (a.dim != b.dim) throw std::invalid_argument("matmul: dimension mismatch");
    HermitianMatrix r = HermitianMatrix::zero(a.dim);
    for (int i = 0; i < a.dim; ++i)
        for (int k = 0; k < a.dim; ++k) {
            const complexd aik = a.at(i, k);
            if (aik == complexd{}) continue;
            for (int j = 0; j < a.dim; ++j) r.at(i, j) += aik * b.at(k, j);
        }
    return r;
}

/// Spectral decomposition: ascending eigenvalues, orthonormal eigenvector
/// columns, phase fixed so each column's largest-magnitude component is real
/// positive.
struct EigenSystem {
    int dim = 2;
    std::array<double, 4> eigenvalues{};
    std::array<complexd, 16> vectors{};  // column k = eigenvector of eigenvalues[k]

    complexd vec(int i, int k) const { return vectors[static_cast<std::size_t>(i * dim + k)]; }
    complexd& vec(int i, int k) { return vectors[static_cast<std::size_t>(i * dim + k)]; }

    HermitianMatrix reconstruct() const {
        HermitianMatrix m = HermitianMatrix::zero(dim);
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j) {
                complexd s{};
                for (int k = 0; k < dim; ++k) s += vec(i, k) * eigenvalues[static_cast<std::size_t>(k)] * std::conj(vec(j, k));
                m.at(i, j) = s;
            }
        return m;
    }
};

namespace detail {

inline void phase_fix_and_sort(EigenSystem& es) {
    const int n = es.dim;
    // ascending eigenvalue order (stable insertion, n <= 4)
    std::array<int, 4> idx{0, 1, 2, 3};
    for (int i = 1; i < n; ++i)
        for (int j = i; j > 0 && es.eigenvalues[static_cast<std::size_t>(idx[static_cast<std::size_t>(j)])] <
                                     es.eigenvalues[static_cast<std::size_t>(idx[static_cast<std::size_t>(j - 1)])];
             --j)
            std::swap(idx[static_cast<std::size_t>(j)], idx[static_cast<std::size_t>(j - 1)]);

    EigenSystem out;
    out.dim = n;
    for (int k = 0; k < n; ++k) {
        const int src = idx[static_cast<std::size_t>(k)];
        out.eigenvalues[static_cast<std::size_t>(k)] = es.eigenvalues[static_cast<std::size_t>(src)];
        int imax = 0;
        double amax = -1.0;
        for (int i = 0; i < n; ++i) {
            const double a = std::abs(es.vec(i, src));
            if (a > amax + 1e-15) {
                amax = a;
                imax = i;
            }
        }
        complexd ph = es.vec(imax, src);
        ph = (std::abs(ph) > 0) ? std::conj(ph) / std::abs(ph) : complexd{1.0, 0.0};
        for (int i = 0; i < n; ++i) out.vec(i, k) = es.vec(i, src) * ph;
    }
    es = out;
}

inline EigenSystem eigh2(const HermitianMatrix& m) {
    EigenSystem es;
    es.dim = 2;
    const double a = m.at(0, 0).real();
    const double d = m.at(1, 1).real();
    const complexd b = m.at(0, 1);
    const double bb = std::abs(b);
    const double mean = 0.5 * (a + d);
    const double disc = std::hypot(0.5 * (a - d), bb);
    es.eigenvalues[0] = mean - disc;
    es.eigenvalues[1] = mean + disc;
    if (bb < 1e-300 && disc < 1e-300) {
        es.vec(0, 0) = 1.0;
        es.vec(1, 1) = 1.0;
        return es;
    }
    if (bb == 0.0) {
        // already diagonal; order columns with the eigenvalues
        const bool swap = a > d;
        es.vec(0, swap ? 1 : 0) = 1.0;
        es.vec(1, swap ? 0 : 1) = 1.0;
        detail::phase_fix_and_sort(es);
        return es;
    }
    // eigenvector for lambda: (b, lambda - a), its orthogonal complement for the other
    for (int k = 0; k < 2; ++k) {
        const double lam = es.eigenvalues[static_cast<std::size_t>(k)];
        complexd v0 = b, v1 = complexd{lam - a, 0.0};
        if (std::abs(lam - d) > std::abs(lam - a)) {
            v0 = complexd{lam - d, 0.0};
            v1 = std::conj(b);
        }
        const double nv = std::sqrt(std::norm(v0) + std::norm(v1));
        es.vec(0, k) = v0 / nv;
        es.vec(1, k) = v1 / nv;
    }
    detail::phase_fix_and_sort(es);
    return es;
}

/// Cyclic complex Jacobi for dim 3..4; quadratic convergence, called on tiny
/// matrices so sweep cost is negligible.
inline EigenSystem eigh_jacobi(const HermitianMatrix& m0) {
    const int n = m0.dim;
    HermitianMatrix a = m0;
    std::array<complexd, 16> v{};
    for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i * n + i)] = 1.0;

    double scale = 0.0;
    for (int i = 0; i < n * n; ++i) scale += std::norm(a.e[static_cast<std::size_t>(i)]);
    scale = std::sqrt(scale);
    if (scale == 0.0) scale = 1.0;

    for (int sweep = 0; sweep < 50; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) off += std::norm(a.at(p, q));
        if (std::sqrt(off) < 1e-15 * scale) break;

        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const complexd apq = a.at(p, q);
                const double mag = std::abs(apq);
                if (mag < 1e-18 * scale) continue;
                const complexd phase = apq / mag;
                const double zeta = (a.at(q, q).real() - a.at(p, p).real()) / (2.0 * mag);
                const double sgn = zeta >= 0.0 ? 1.0 : -1.0;
                const double t = -sgn / (std::abs(zeta) + std::hypot(1.0, zeta));
                const double c = 1.0 / std::hypot(1.0, t);
                const double s = t * c;
                // G: col p <- c*p + s*conj(phase)... applied as A <- G^H A G, V <- V G
                // with G[p][p]=c, G[p][q]=-s*phase, G[q][p]=s*conj(phase), G[q][q]=c
                for (int i = 0; i < n; ++i) {
                    const complexd aip = a.at(i, p), aiq = a.at(i, q);
                    a.at(i, p) = c * aip + s * std::conj(phase) * aiq;
                    a.at(i, q) = -s * phase * aip + c * aiq;
                }
                for (int j = 0; j < n; ++j) {
                    const complexd apj = a.at(p, j), aqj = a.at(q, j);
                    a.at(p, j) = c * apj + s * phase * aqj;
                    a.at(q, j) = -s * std::conj(phase) * apj + c * aqj;
                }
                for (int i = 0; i < n; ++i) {
                    const complexd vip = v[static_cast<std::size_t>(i * n + p)], viq = v[static_cast<std::size_t>(i * n + q)];
                    v[static_cast<std::size_t>(i * n + p)] = c * vip + s * std::conj(phase) * viq;
                    v[static_cast<std::size_t>(i * n + q)] = -s * phase * vip + c * viq;
                }
            }
        }
    }

    EigenSystem es;
    es.dim = n;
    for (int i = 0; i < n; ++i) es.eigenvalues[static_cast<std::size_t>(i)] = a.at(i, i).real();
    for (int i = 0; i < n * n; ++i) es.vectors[static_cast<std::size_t>(i)] = v[static_cast<std::size_t>(i)];
    phase_fix_and_sort(es);
    return es;
}

}  // namespace detail

/// Spectral decomposition of a Hermitian matrix (validated on entry).
inline EigenSystem eigh(const HermitianMatrix& m) {
    for (int i = 0; i < m.dim; ++i)
        for (int j = i; j < m.dim; ++j)
            if (std::abs(m.at(i, j) - std::conj(m.at(j, i))) > kHermitianTol)
                throw std::invalid_argument("eigh: input not Hermitian at entries (" + std::to_string(i) + "," +
                                            std::to_string(j) + ")/(" + std::to_string(j) + "," + std::to_string(i) + ")");
    return m.dim == 2 ? detail::eigh2(m) : detail::eigh_jacobi(m);
}

/// V diag(lambda^q) V^H for PSD input. lambda in [-1e-12, 0) is clamped to 0;
/// below that is a domain error, as is q <= 0 with a zero eigenvalue.
inline HermitianMatrix matrix_power(const HermitianMatrix& m, double q) {
    EigenSystem es = eigh(m);
    std::array<double, 4> lp{};
    double scale = std::max(std::abs(es.eigenvalues[0]), std::abs(es.eigenvalues[static_cast<std::size_t>(m.dim - 1)]));
    if (scale == 0.0) scale = 1.0;
    for (int k = 0; k < m.dim; ++k) {
        double lam = es.eigenvalues[static_cast<std::size_t>(k)];
        if (lam < -1e-12 * std::max(1.0, scale))
            throw std::domain_error("matrix_power: negative eigenvalue " + std::to_string(lam));
        if (lam < 0.0) lam = 0.0;
        if (lam == 0.0 && q <= 0.0) throw std::domain_error("matrix_power: q <= 0 with zero eigenvalue");
        lp[static_cast<std::size_t>(k)] = std::pow(lam, q);
    }
    HermitianMatrix r = HermitianMatrix::zero(m.dim);
    for (int i = 0; i < m.dim; ++i)
        for (int j = 0; j < m.dim; ++j) {
            complexd s{};
            for (int k = 0; k < m.dim; ++k) s += es.vec(i, k) * lp[static_cast<std::size_t>(k)] * std::conj(es.vec(j, k));
            r.at(i, j) = s;
        }
    // re-symmetrize rounding noise
    for (int i = 0; i < m.dim; ++i) {
        r.at(i, i) = complexd{r.at(i, i).real(), 0.0};
        for (int j = i + 1; j < m.dim; ++j) {
            const complexd avg = 0.5 * (r.at(i, j) + std::conj(r.at(j, i)));
            r.at(i, j) = avg;
            r.at(j, i) = std::conj(avg);
        }
    }
    return r;
}

}  // namespace qprior
