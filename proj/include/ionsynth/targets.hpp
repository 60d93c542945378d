#pragma once

// Benchmark target families: the even two-mode cat state
// N (|alpha>|alpha> + |-alpha>|-alpha>) and the correlated twin state
// e^{-|alpha|^2/2} sum_m alpha^m / sqrt(m!) |m,m>, both truncated to a
// coefficient rectangle and renormalized.  Amplitudes are evaluated through
// log-factorials so large cutoffs do not overflow.

#include <cmath>
#include <complex>
#include <optional>
#include <string>

#include "ionsynth/fock.hpp"

namespace ionsynth {

struct TargetSpec {
    enum class Kind { cat, correlated, custom } kind = Kind::cat;
    cplx alpha{0.0, 0.0};
    int m_max = 0;
    int n_max = 0;
    std::string source;  // coefficient file for Kind::custom
};

namespace detail {

// |alpha|^k / sqrt(k!), with the k = 0 limit handled for alpha = 0.
inline double coherent_mag(double abs_alpha, int k) {
    if (abs_alpha == 0.0) return k == 0 ? 1.0 : 0.0;
    return std::exp(k * std::log(abs_alpha) - 0.5 * std::lgamma(k + 1.0));
}

inline double poisson_weight(double abs_alpha2, int k) {
    if (abs_alpha2 == 0.0) return k == 0 ? 1.0 : 0.0;
    return std::exp(k * std::log(abs_alpha2) - abs_alpha2 - std::lgamma(k + 1.0));
}

}  // namespace detail

// Even two-mode cat: Q_mn ~ (alpha^{m+n} / sqrt(m! n!)) (1 + (-1)^{m+n}),
// zero on odd m+n.  truncated_tail receives the probability mass the
// rectangle cut away from the untruncated state.
inline TargetState cat_state(cplx alpha, int m_max, int n_max, double* truncated_tail = nullptr) {
    TargetState t(m_max, n_max);
    const double abs_a = std::abs(alpha);
    const double phase = std::arg(alpha);
    double partial = 0.0;
    for (int m = 0; m <= m_max; ++m) {
        for (int n = 0; n <= n_max; ++n) {
            if ((m + n) % 2 != 0) continue;  // parity cancellation
            const double mag =
                2.0 * detail::coherent_mag(abs_a, m) * detail::coherent_mag(abs_a, n);
            t.at(m, n) = std::polar(mag, phase * (m + n));
            partial += mag * mag;
        }
    }
    if (partial == 0.0) throw std::domain_error("cat_state: all truncated coefficients are zero");
    if (truncated_tail) {
        // Untruncated norm^2 of the same unnormalized coefficients: 4 cosh(2|alpha|^2).
        const double full = 4.0 * std::cosh(2.0 * abs_a * abs_a);
        *truncated_tail = std::max(0.0, 1.0 - partial / full);
    }
    const double inv = 1.0 / std::sqrt(partial);
    for (cplx& c : t.q) c *= inv;
    return t;
}

// Correlated twin state on the diagonal |m,m>, n_max = m_max.
inline TargetState correlated_state(cplx alpha, int m_max, double* truncated_tail = nullptr) {
    TargetState t(m_max, m_max);
    const double abs_a = std::abs(alpha);
    const double phase = std::arg(alpha);
    double partial = 0.0;
    for (int m = 0; m <= m_max; ++m) {
        const double w = detail::poisson_weight(abs_a * abs_a, m);
        t.at(m, m) = std::polar(std::sqrt(w), phase * m);
        partial += w;
    }
    if (partial == 0.0)
        throw std::domain_error("correlated_state: all truncated coefficients are zero");
    if (truncated_tail) *truncated_tail = std::max(0.0, 1.0 - partial);
    const double inv = 1.0 / std::sqrt(partial);
    for (cplx& c : t.q) c *= inv;
    return t;
}

}  // namespace ionsynth
