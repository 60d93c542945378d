#pragma once

// Two-mode vibrational Fock space tensored with three internal electronic
// levels.  States live on the triangular lattice {(m, n) : m + n <= j_max}
// with levels a, b, c at every lattice point.  Amplitudes are stored densely,
// ordered by total quantum number J = m + n ascending, then m ascending,
// then level; that ordering is frozen so serialized states and sequences
// stay comparable across runs.

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace ionsynth {

using cplx = std::complex<double>;

enum class Level : int { a = 0, b = 1, c = 2 };

inline constexpr const char* level_name(Level l) {
    switch (l) {
        case Level::a: return "a";
        case Level::b: return "b";
        case Level::c: return "c";
    }
    return "?";
}

struct BasisIndex {
    int m = 0;      // x-mode quanta
    int n = 0;      // y-mode quanta
    Level level = Level::a;

    friend bool operator==(const BasisIndex&, const BasisIndex&) = default;
};

inline std::string to_string(const BasisIndex& b) {
    return "(" + std::to_string(b.m) + "," + std::to_string(b.n) + "," +
           level_name(b.level) + ")";
}

// Number of amplitudes for a triangle of side j_max: 3 * (j_max+1)(j_max+2)/2.
inline std::size_t dim(int j_max) {
    if (j_max < 0) throw std::out_of_range("dim: negative j_max");
    const std::size_t t = static_cast<std::size_t>(j_max);
    return 3 * (t + 1) * (t + 2) / 2;
}

namespace detail {
// Lattice points with total quanta strictly below J.
inline std::size_t pairs_below(int j) {
    const std::size_t t = static_cast<std::size_t>(j);
    return t * (t + 1) / 2;
}
}  // namespace detail

inline std::size_t index_of(const BasisIndex& b, int j_max) {
    if (b.m < 0 || b.n < 0 || b.m + b.n > j_max)
        throw std::out_of_range("index_of: " + to_string(b) + " outside triangle j_max=" +
                                std::to_string(j_max));
    const int j = b.m + b.n;
    return 3 * (detail::pairs_below(j) + static_cast<std::size_t>(b.m)) +
           static_cast<std::size_t>(b.level);
}

inline BasisIndex inverse_index(std::size_t offset, int j_max) {
    if (offset >= dim(j_max))
        throw std::out_of_range("inverse_index: offset " + std::to_string(offset) +
                                " out of range for j_max=" + std::to_string(j_max));
    const std::size_t q = offset / 3;
    int j = static_cast<int>((std::sqrt(8.0 * static_cast<double>(q) + 1.0) - 1.0) / 2.0);
    while (detail::pairs_below(j + 1) <= q) ++j;
    while (detail::pairs_below(j) > q) --j;
    const int m = static_cast<int>(q - detail::pairs_below(j));
    return BasisIndex{m, j - m, static_cast<Level>(offset % 3)};
}

// Composite vibrational (x) tensor (y) tensor internal state vector.
struct CompositeState {
    int j_max = 0;
    std::vector<cplx> amp;

    CompositeState() : amp(dim(0), cplx{0.0, 0.0}) {}
    explicit CompositeState(int jmax) : j_max(jmax), amp(dim(jmax), cplx{0.0, 0.0}) {}

    cplx& at(const BasisIndex& b) { return amp[index_of(b, j_max)]; }
    const cplx& at(const BasisIndex& b) const { return amp[index_of(b, j_max)]; }
};

// |0,0> tensor |a>, the starting point of every preparation run.
inline CompositeState vacuum_state(int j_max) {
    CompositeState s(j_max);
    s.at({0, 0, Level::a}) = 1.0;
    return s;
}

inline double norm(const CompositeState& s) {
    double acc = 0.0;
    for (const cplx& q : s.amp) acc += std::norm(q);
    return std::sqrt(acc);
}

inline cplx overlap(const CompositeState& s1, const CompositeState& s2) {
    if (s1.j_max != s2.j_max)
        throw std::invalid_argument("overlap: dimension mismatch (j_max " +
                                    std::to_string(s1.j_max) + " vs " +
                                    std::to_string(s2.j_max) + ")");
    cplx acc{0.0, 0.0};
    for (std::size_t i = 0; i < s1.amp.size(); ++i) acc += std::conj(s1.amp[i]) * s2.amp[i];
    return acc;
}

// Vibrational-only target: coefficients Q_mn on the rectangle
// [0, m_max] x [0, n_max], stored row-major in m.
struct TargetState {
    int m_max = 0;
    int n_max = 0;
    std::vector<cplx> q;

    TargetState() : q(1, cplx{0.0, 0.0}) {}
    TargetState(int mmax, int nmax)
        : m_max(mmax), n_max(nmax),
          q(static_cast<std::size_t>(mmax + 1) * static_cast<std::size_t>(nmax + 1),
            cplx{0.0, 0.0}) {
        if (mmax < 0 || nmax < 0) throw std::out_of_range("TargetState: negative cutoff");
    }

    cplx& at(int m, int n) { return q[idx(m, n)]; }
    const cplx& at(int m, int n) const { return q[idx(m, n)]; }

    std::size_t idx(int m, int n) const {
        if (m < 0 || m > m_max || n < 0 || n > n_max)
            throw std::out_of_range("TargetState: (" + std::to_string(m) + "," +
                                    std::to_string(n) + ") outside rectangle");
        return static_cast<std::size_t>(m) * static_cast<std::size_t>(n_max + 1) +
               static_cast<std::size_t>(n);
    }

    double norm() const {
        double acc = 0.0;
        for (const cplx& c : q) acc += std::norm(c);
        return std::sqrt(acc);
    }
};

// Place the target on one internal level inside a triangle of side j_max
// (defaults to the smallest triangle containing the rectangle, m_max + n_max).
inline CompositeState embed_target(const TargetState& t, Level level, int j_max = -1) {
    const int needed = t.m_max + t.n_max;
    if (j_max < 0) j_max = needed;
    if (j_max < needed)
        throw std::invalid_argument("embed_target: j_max=" + std::to_string(j_max) +
                                    " cannot hold rectangle " + std::to_string(t.m_max) +
                                    "x" + std::to_string(t.n_max));
    CompositeState s(j_max);
    for (int m = 0; m <= t.m_max; ++m)
        for (int n = 0; n <= t.n_max; ++n) s.at({m, n, level}) = t.at(m, n);
    return s;
}

// One noiseless realization of the squared-overlap figure of merit against
// |target> on the given internal level.
inline double fidelity_single(const CompositeState& s, const TargetState& t, Level level) {
    if (s.j_max < t.m_max + t.n_max)
        throw std::invalid_argument("fidelity_single: state triangle too small for target");
    const CompositeState ref = embed_target(t, level, s.j_max);
    const double f = std::norm(overlap(s, ref));
    return f;
}

// Mean total vibrational quanta <n_x + n_y>.
inline double mean_quanta(const CompositeState& s) {
    double acc = 0.0;
    for (std::size_t i = 0; i < s.amp.size(); ++i) {
        const double p = std::norm(s.amp[i]);
        if (p == 0.0) continue;
        const BasisIndex b = inverse_index(i, s.j_max);
        acc += p * (b.m + b.n);
    }
    return acc;
}

}  // namespace ionsynth
