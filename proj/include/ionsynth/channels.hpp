#pragma once

// The five laser-interaction channels, each an exactly solvable set of
// disjoint pairwise rotations on the composite state:
//
//   1  carrier a<->b        (m,n,a) <-> (m,n,b)
//   2  carrier b<->c        (m,n,b) <-> (m,n,c)
//   3  two-mode exchange    (m,n,a) <-> (m+1,n-1,b)
//   4  two-mode exchange    (m,n,b) <-> (m+1,n-1,c)
//   5  x sideband           (m,n,a) <-> (m-1,n,b)
//
// Channels 1-4 conserve the total quantum number J = m + n; channel 5 moves
// population between adjacent J.  A pulse rotates every coupled pair
// simultaneously: with u the state on the channel's lower level, v its
// partner, and x = base_angle * relative_rabi(u),
//
//   Q'_u =  cos(x) Q_u  -  i e^{-i theta} sin(x) Q_v
//   Q'_v = -i e^{+i theta} sin(x) Q_u  +  cos(x) Q_v
//
// which is exp(-i H t) for H = g r |v><u| + g* r |u><v|, g = |g| e^{i theta}.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>

#include "ionsynth/errors.hpp"
#include "ionsynth/fock.hpp"

namespace ionsynth {

enum class ChannelId : int {
    carrier_ab = 1,   // electronic flip a<->b, no motional factor
    carrier_bc = 2,   // electronic flip b<->c
    exchange_ab = 3,  // swaps one quantum y->x while flipping a->b
    exchange_bc = 4,  // same exchange on the b<->c transition
    sideband_ab = 5,  // removes one x quantum while flipping a->b
};

inline constexpr Level lower_level(ChannelId ch) {
    switch (ch) {
        case ChannelId::carrier_ab:
        case ChannelId::exchange_ab:
        case ChannelId::sideband_ab: return Level::a;
        case ChannelId::carrier_bc:
        case ChannelId::exchange_bc: return Level::b;
    }
    return Level::a;
}

inline constexpr Level upper_level(ChannelId ch) {
    switch (ch) {
        case ChannelId::carrier_ab:
        case ChannelId::exchange_ab:
        case ChannelId::sideband_ab: return Level::b;
        case ChannelId::carrier_bc:
        case ChannelId::exchange_bc: return Level::c;
    }
    return Level::b;
}

// Coupling matrix-element regime.  Lamb-Dicke gives the sqrt factors of the
// idealized Hamiltonians; Nonlinear evaluates the exact two-mode element with
// associated Laguerre polynomials at finite Lamb-Dicke parameters.
struct RabiRegime {
    enum class Kind { lamb_dicke, nonlinear } kind = Kind::lamb_dicke;
    double eps_x = 0.0;
    double eps_y = 0.0;

    static RabiRegime lamb_dicke() { return {}; }
    static RabiRegime nonlinear(double ex, double ey) {
        if (!(ex > 0.0 && ex < 1.0) || !(ey > 0.0 && ey < 1.0))
            throw std::invalid_argument("RabiRegime: Lamb-Dicke parameters must lie in (0,1)");
        return {Kind::nonlinear, ex, ey};
    }

    friend bool operator==(const RabiRegime&, const RabiRegime&) = default;
};

// One elementary unitary: channel, the component it was compiled to cancel,
// laser phase theta, and the dimensionless pulse area |g| t.
struct Pulse {
    ChannelId channel = ChannelId::carrier_ab;
    BasisIndex cancel{};
    double theta = 0.0;       // in [0, 2*pi)
    double base_angle = 0.0;  // >= 0
    RabiRegime regime{};
};

inline double reduce_angle(double theta) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double r = std::fmod(theta, two_pi);
    if (r < 0.0) r += two_pi;
    if (r == two_pi) r = 0.0;
    return r;
}

// Unique partner of b under the channel's coupling, or nothing if b sits on
// an uncoupled level or the partner would leave the triangle.
inline std::optional<BasisIndex> coupled_partner(ChannelId ch, const BasisIndex& b, int j_max) {
    const auto inside = [j_max](int m, int n) { return m >= 0 && n >= 0 && m + n <= j_max; };
    switch (ch) {
        case ChannelId::carrier_ab:
            if (b.level == Level::a) return BasisIndex{b.m, b.n, Level::b};
            if (b.level == Level::b) return BasisIndex{b.m, b.n, Level::a};
            return std::nullopt;
        case ChannelId::carrier_bc:
            if (b.level == Level::b) return BasisIndex{b.m, b.n, Level::c};
            if (b.level == Level::c) return BasisIndex{b.m, b.n, Level::b};
            return std::nullopt;
        case ChannelId::exchange_ab:
            if (b.level == Level::a && b.n >= 1) return BasisIndex{b.m + 1, b.n - 1, Level::b};
            if (b.level == Level::b && b.m >= 1) return BasisIndex{b.m - 1, b.n + 1, Level::a};
            return std::nullopt;
        case ChannelId::exchange_bc:
            if (b.level == Level::b && b.n >= 1) return BasisIndex{b.m + 1, b.n - 1, Level::c};
            if (b.level == Level::c && b.m >= 1) return BasisIndex{b.m - 1, b.n + 1, Level::b};
            return std::nullopt;
        case ChannelId::sideband_ab:
            if (b.level == Level::a && b.m >= 1) return BasisIndex{b.m - 1, b.n, Level::b};
            if (b.level == Level::b && inside(b.m + 1, b.n)) return BasisIndex{b.m + 1, b.n, Level::a};
            return std::nullopt;
    }
    return std::nullopt;
}

// Associated Laguerre polynomial L^1_m(x) by the three-term recurrence.
inline double laguerre_assoc1(int m, double x) {
    if (m < 0) throw std::invalid_argument("laguerre_assoc1: negative degree");
    if (m == 0) return 1.0;
    double prev = 1.0;        // L^1_0
    double cur = 2.0 - x;     // L^1_1
    for (int k = 1; k < m; ++k) {
        const double next = ((2.0 * k + 2.0 - x) * cur - (k + 1.0) * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    return cur;
}

// Dimensionless factor multiplying |g| t to give the rotation angle of the
// pair whose lower-level member is `source`.  The nonlinear element is only
// defined for the two-mode exchange channels; the carriers have no motional
// dependence and the nonlinear sideband element is not modeled.
inline double relative_rabi(ChannelId ch, const BasisIndex& source, const RabiRegime& regime) {
    const double m = static_cast<double>(source.m);
    const double n = static_cast<double>(source.n);
    switch (ch) {
        case ChannelId::carrier_ab:
        case ChannelId::carrier_bc:
            return 1.0;
        case ChannelId::exchange_ab:
        case ChannelId::exchange_bc: {
            if (source.n < 1)
                throw std::invalid_argument("relative_rabi: exchange needs n >= 1 on the source");
            const double ld = std::sqrt((m + 1.0) * n);
            if (regime.kind == RabiRegime::Kind::lamb_dicke) return ld;
            const double ex2 = regime.eps_x * regime.eps_x;
            const double ey2 = regime.eps_y * regime.eps_y;
            const double element = std::exp(-0.5 * (ex2 + ey2)) *
                                   laguerre_assoc1(source.m, ex2) *
                                   laguerre_assoc1(source.n - 1, ey2) / ld;
            return std::abs(element);
        }
        case ChannelId::sideband_ab:
            if (regime.kind == RabiRegime::Kind::nonlinear)
                throw unsupported_regime(
                    "relative_rabi: nonlinear regime is not defined for the sideband channel");
            if (source.m < 1)
                throw std::invalid_argument("relative_rabi: sideband needs m >= 1 on the source");
            return std::sqrt(m);
    }
    return 0.0;
}

namespace detail {

// Visit every coupled pair once, from the lower-level side.
// fn(source_index, u_offset, v_offset).
template <class Fn>
inline void for_each_pair(ChannelId ch, int j_max, Fn&& fn) {
    const int lo = static_cast<int>(lower_level(ch));
    const int up = static_cast<int>(upper_level(ch));
    for (int j = 0; j <= j_max; ++j) {
        const std::size_t base = 3 * pairs_below(j);
        for (int m = 0; m <= j; ++m) {
            const int n = j - m;
            const std::size_t u = base + 3 * static_cast<std::size_t>(m) + lo;
            switch (ch) {
                case ChannelId::carrier_ab:
                case ChannelId::carrier_bc:
                    fn(BasisIndex{m, n, static_cast<Level>(lo)}, u, base + 3 * m + up);
                    break;
                case ChannelId::exchange_ab:
                case ChannelId::exchange_bc:
                    if (n >= 1)
                        fn(BasisIndex{m, n, static_cast<Level>(lo)}, u, base + 3 * (m + 1) + up);
                    break;
                case ChannelId::sideband_ab:
                    if (m >= 1)
                        fn(BasisIndex{m, n, static_cast<Level>(lo)}, u,
                           3 * pairs_below(j - 1) + 3 * static_cast<std::size_t>(m - 1) + up);
                    break;
            }
        }
    }
}

}  // namespace detail

inline void apply_pulse_inplace(CompositeState& s, const Pulse& p) {
    if (p.base_angle == 0.0) return;
    const cplx up_factor = cplx{0.0, -1.0} * std::polar(1.0, p.theta);
    const cplx dn_factor = cplx{0.0, -1.0} * std::polar(1.0, -p.theta);
    detail::for_each_pair(p.channel, s.j_max, [&](const BasisIndex& src, std::size_t u, std::size_t v) {
        const double r = relative_rabi(p.channel, src, p.regime);
        const double x = p.base_angle * r;
        if (x == 0.0) return;  // vanishing matrix element: pair untouched
        const double c = std::cos(x);
        const double sn = std::sin(x);
        const cplx qu = s.amp[u];
        const cplx qv = s.amp[v];
        s.amp[u] = c * qu + dn_factor * sn * qv;
        s.amp[v] = up_factor * sn * qu + c * qv;
    });
}

inline CompositeState apply_pulse(const CompositeState& s, const Pulse& p) {
    CompositeState out = s;
    apply_pulse_inplace(out, p);
    return out;
}

// Undo a pulse by shifting the laser phase by pi.
inline Pulse inverse(const Pulse& p) {
    Pulse q = p;
    q.theta = reduce_angle(p.theta + std::numbers::pi);
    return q;
}

// Physical-parameter window in which the channel Hamiltonians are valid:
// the second rotating-wave approximation requires the exchange rate to stay
// far below both trap frequencies, and the trap must be anisotropic enough
// to keep spurious resonances detuned.
struct FeasibilityParams {
    double g_mag = 0.0;   // effective Raman coupling, angular frequency
    double eps_x = 0.0;
    double eps_y = 0.0;
    double nu_x = 0.0;    // trap frequencies
    double nu_y = 0.0;
    int m_max = 0;
    int n_max = 0;
    double margin = 0.1;  // operational reading of "much less than"
};

struct FeasibilityReport {
    double rwa_ratio = 0.0;        // g eps_x eps_y max(M,N) / min(nu)
    bool rwa_pass = false;
    double anisotropy_ratio = 0.0; // max(nu) / min(nu)
    bool anisotropy_pass = false;
    double margin = 0.1;
    bool pass = false;
};

inline FeasibilityReport check_feasibility(const FeasibilityParams& fp) {
    if (fp.g_mag <= 0.0 || fp.nu_x <= 0.0 || fp.nu_y <= 0.0 || fp.margin <= 0.0)
        throw std::invalid_argument("check_feasibility: couplings and frequencies must be positive");
    FeasibilityReport rep;
    rep.margin = fp.margin;
    const double nu_min = std::min(fp.nu_x, fp.nu_y);
    const double nu_max = std::max(fp.nu_x, fp.nu_y);
    rep.rwa_ratio = fp.g_mag * fp.eps_x * fp.eps_y *
                    static_cast<double>(std::max(fp.m_max, fp.n_max)) / nu_min;
    rep.rwa_pass = rep.rwa_ratio <= fp.margin;
    rep.anisotropy_ratio = nu_max / nu_min;
    rep.anisotropy_pass = rep.anisotropy_ratio >= 5.0;
    rep.pass = rep.rwa_pass && rep.anisotropy_pass;
    return rep;
}

}  // namespace ionsynth
