#pragma once

// Technical-noise Monte Carlo.  Each compiled pulse area is a complex number
// z = base_angle * e^{i theta}; a noisy realization displaces z by independent
// uniform draws on the real and imaginary axes and re-runs the preparation.
// Runs are averaged into a fidelity report per noise range delta.
//
// Randomness comes from splitmix64 streams derived from
// (seed, delta index, run index), so every run is an independent substream
// and results do not depend on execution order or worker count.

#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include "ionsynth/channels.hpp"
#include "ionsynth/fock.hpp"
#include "ionsynth/synth.hpp"

namespace ionsynth {

inline constexpr const char* kRngId = "splitmix64";

namespace detail {

inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace detail

struct RngStream {
    std::uint64_t state = 0;

    explicit RngStream(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        state += 0x9e3779b97f4a7c15ULL;
        return detail::mix64(state);
    }

    // Uniform on [0, 1) with 53 bits.
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

inline std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t delta_index,
                                   std::uint64_t run_index) {
    std::uint64_t h = detail::mix64(seed + 0x9e3779b97f4a7c15ULL);
    h = detail::mix64(h ^ (delta_index + 0xd1b54a32d192ed03ULL));
    h = detail::mix64(h ^ (run_index + 0x8cb92ba72f3d8dd7ULL));
    return h;
}

// Where the uniform fluctuation interval sits relative to the ideal value.
// `centered` (default) draws each axis from [-delta/2, +delta/2].
enum class NoiseWindow { centered, centered_wide, one_sided };

inline constexpr const char* noise_window_name(NoiseWindow w) {
    switch (w) {
        case NoiseWindow::centered: return "centered";
        case NoiseWindow::centered_wide: return "centered_wide";
        case NoiseWindow::one_sided: return "one_sided";
    }
    return "?";
}

struct NoiseSpec {
    double delta = 0.0;
    int runs = 100;
    std::uint64_t seed = 0;
    NoiseWindow window = NoiseWindow::centered;
};

struct FidelityReport {
    double delta = 0.0;
    double mean_fidelity = 0.0;
    double std_error = 0.0;
    int runs = 0;
    std::uint64_t seed = 0;
};

// Displace the pulse's complex area by one draw per axis (real first).
template <class Rng>
inline Pulse perturb(const Pulse& p, double delta, Rng& rng,
                     NoiseWindow window = NoiseWindow::centered) {
    if (delta < 0.0) throw std::invalid_argument("perturb: negative delta");
    if (delta == 0.0) return p;
    auto draw = [&]() {
        const double u = rng.uniform01();
        switch (window) {
            case NoiseWindow::centered: return (u - 0.5) * delta;
            case NoiseWindow::centered_wide: return (2.0 * u - 1.0) * delta;
            case NoiseWindow::one_sided: return u * delta;
        }
        return 0.0;
    };
    const double u_re = draw();
    const double u_im = draw();
    const cplx z = std::polar(p.base_angle, p.theta) + cplx{u_re, u_im};
    Pulse out = p;
    out.base_angle = std::abs(z);
    out.theta = reduce_angle(std::arg(z));
    return out;
}

namespace detail {

template <class Body>
inline void parallel_runs(int runs, int threads, Body&& body) {
    if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
    if (threads <= 1 || runs <= 1) {
        for (int r = 0; r < runs; ++r) body(r);
        return;
    }
    threads = std::min(threads, runs);
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int w = 0; w < threads; ++w) {
        pool.emplace_back([w, runs, threads, &body] {
            for (int r = w; r < runs; r += threads) body(r);
        });
    }
    for (auto& th : pool) th.join();
}

inline FidelityReport run_noisy_indexed(const PulseSequence& seq, const TargetState& t,
                                        const NoiseSpec& ns, std::uint64_t delta_index,
                                        int threads) {
    if (seq.direction != Direction::prepare)
        throw std::invalid_argument("run_noisy: sequence direction must be prepare");
    if (seq.j_max < t.m_max + t.n_max)
        throw std::invalid_argument("run_noisy: sequence triangle too small for target");
    if (ns.runs < 1) throw std::invalid_argument("run_noisy: runs must be >= 1");

    const CompositeState ref = embed_target(t, Level::a, seq.j_max);
    std::vector<double> fid(static_cast<std::size_t>(ns.runs), 0.0);
    parallel_runs(ns.runs, threads, [&](int r) {
        RngStream rng(derive_stream(ns.seed, delta_index, static_cast<std::uint64_t>(r)));
        CompositeState s = vacuum_state(seq.j_max);
        for (const Pulse& p : seq.pulses)
            apply_pulse_inplace(s, perturb(p, ns.delta, rng, ns.window));
        fid[static_cast<std::size_t>(r)] = std::norm(overlap(s, ref));
    });

    FidelityReport rep;
    rep.delta = ns.delta;
    rep.runs = ns.runs;
    rep.seed = ns.seed;
    double sum = 0.0;
    for (double f : fid) sum += f;
    rep.mean_fidelity = sum / ns.runs;
    if (ns.runs > 1) {
        double ss = 0.0;
        for (double f : fid) ss += (f - rep.mean_fidelity) * (f - rep.mean_fidelity);
        rep.std_error = std::sqrt(ss / (static_cast<double>(ns.runs) * (ns.runs - 1)));
    }
    return rep;
}

}  // namespace detail

// Monte Carlo fidelity of a prepared state under pulse-area noise of range
// delta, averaged over ns.runs independent realizations.
inline FidelityReport run_noisy(const PulseSequence& seq, const TargetState& t,
                                const NoiseSpec& ns, int threads = 1) {
    return detail::run_noisy_indexed(seq, t, ns, 0, threads);
}

// One report per delta; substream index = position in the list.
inline std::vector<FidelityReport> sweep(const PulseSequence& seq, const TargetState& t,
                                         const std::vector<double>& deltas, int runs,
                                         std::uint64_t seed,
                                         NoiseWindow window = NoiseWindow::centered,
                                         int threads = 1) {
    if (deltas.empty()) throw std::invalid_argument("sweep: empty delta list");
    std::vector<FidelityReport> reports;
    reports.reserve(deltas.size());
    for (std::size_t i = 0; i < deltas.size(); ++i) {
        NoiseSpec ns{deltas[i], runs, seed, window};
        reports.push_back(detail::run_noisy_indexed(seq, t, ns, i, threads));
    }
    return reports;
}

// Smallest rectangle cutoffs (m_max, n_max) whose excluded tail probability
// is at most epsilon, for a unit-norm coefficient rule of unbounded support.
// Preference order: minimal m_max + n_max, then closest to symmetric, then
// smaller m_max.  The search stops at hard_cap per axis.
inline std::pair<int, int> truncate_cutoffs(const std::function<cplx(int, int)>& coeffs,
                                            double epsilon, int hard_cap = 200) {
    if (epsilon <= 0.0) throw std::invalid_argument("truncate_cutoffs: epsilon must be > 0");
    if (hard_cap < 0) throw std::invalid_argument("truncate_cutoffs: negative cap");
    const int side = hard_cap + 1;
    std::vector<double> prefix(static_cast<std::size_t>(side) * side, 0.0);
    auto at = [&](int m, int n) -> double& {
        return prefix[static_cast<std::size_t>(m) * side + n];
    };
    for (int m = 0; m < side; ++m) {
        double row = 0.0;
        for (int n = 0; n < side; ++n) {
            row += std::norm(coeffs(m, n));
            at(m, n) = row + (m > 0 ? at(m - 1, n) : 0.0);
        }
    }
    bool found = false;
    int best_m = 0, best_n = 0;
    auto better = [&](int m, int n) {
        if (!found) return true;
        const int sum_new = m + n, sum_old = best_m + best_n;
        if (sum_new != sum_old) return sum_new < sum_old;
        const int asym_new = std::abs(m - n), asym_old = std::abs(best_m - best_n);
        if (asym_new != asym_old) return asym_new < asym_old;
        return m < best_m;
    };
    for (int m = 0; m < side; ++m) {
        for (int n = 0; n < side; ++n) {
            if (1.0 - at(m, n) > epsilon) continue;
            if (better(m, n)) {
                best_m = m;
                best_n = n;
                found = true;
            }
            break;  // larger n on this row only grows the sum
        }
    }
    if (!found)
        throw std::runtime_error("truncate_cutoffs: no cutoffs within hard cap " +
                                 std::to_string(hard_cap) + " reach the requested tail");
    return {best_m, best_n};
}

}  // namespace ionsynth
