#pragma once

// Pulse-sequence compiler.  A target state is "de-evolved" into the vacuum by
// a fixed schedule of cancellations solved against the live simulated state:
// for J = j_max .. 1
//   shrink_subspace(J)    concentrates all of H_J into (J,0,a),
//   clear_auxiliary(J-1)  empties levels b,c of H_{J-1} into (J-1,0,b),
//   transfer_down(J)      moves (J,0,a) down into (J-1,0,b),
// and a final carrier pulse folds (0,0,b) into (0,0,a).  Reversing the pulse
// list with phases shifted by pi turns the result into a vacuum-to-target
// preparation sequence.

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "ionsynth/channels.hpp"
#include "ionsynth/errors.hpp"
#include "ionsynth/fock.hpp"

namespace ionsynth {

// Amplitudes below this produce no pulse; the slot is recorded as skipped.
inline constexpr double kSkipTolerance = 1e-14;
// Below this a coupling matrix element counts as vanished.
inline constexpr double kRabiTolerance = 1e-12;
// De-evolution must leave at most this much population outside (0,0,a).
inline constexpr double kVacuumResidualTolerance = 1e-9;

enum class Direction { deevolve, prepare };

struct PulseSequence {
    Direction direction = Direction::deevolve;
    int j_max = 0;
    std::vector<Pulse> pulses;  // application order = list order
    int skipped = 0;            // zero-amplitude slots omitted

    std::size_t emitted() const { return pulses.size(); }
    std::size_t slots() const { return pulses.size() + static_cast<std::size_t>(skipped); }
};

struct SynthesisResult {
    PulseSequence sequence;
    double residual_vacuum_infidelity = 0.0;  // 1 - |Q_{0,0,a}|^2 after de-evolution
    double global_phase = 0.0;                // arg of the final (0,0,a) amplitude
};

struct CancelSolution {
    double theta = 0.0;
    double base_angle = 0.0;
};

// Laser phase and pulse area that zero q_cancel when it sits on the
// channel's lower level; rel_rabi is the pair's matrix-element factor.
inline CancelSolution solve_cancellation(cplx q_cancel, cplx q_partner, double rel_rabi) {
    const double mag_c = std::abs(q_cancel);
    if (mag_c <= kSkipTolerance) return {0.0, 0.0};
    if (rel_rabi <= kRabiTolerance)
        throw pulse_infeasible("solve_cancellation: matrix element " + std::to_string(rel_rabi) +
                               " too small to cancel amplitude of magnitude " +
                               std::to_string(mag_c));
    const double theta =
        reduce_angle(std::arg(q_partner) - std::arg(q_cancel) + 0.5 * std::numbers::pi);
    const double base_angle = std::atan2(mag_c, std::abs(q_partner)) / rel_rabi;
    return {theta, base_angle};
}

namespace detail {

// Solve, emit, and apply one cancellation pulse against the live state.
// When the cancelled component sits on the channel's upper level the rotation
// sees it in the second slot of the pair, so the phase flips sign.
struct SequenceBuilder {
    CompositeState& state;
    RabiRegime requested;
    std::vector<Pulse> pulses;
    int skipped = 0;

    // Only the two-mode exchange channels carry the nonlinear element; the
    // carriers and the sideband are emitted in their Lamb-Dicke form.
    RabiRegime regime_for(ChannelId ch) const {
        if (ch == ChannelId::exchange_ab || ch == ChannelId::exchange_bc) return requested;
        return RabiRegime::lamb_dicke();
    }

    void emit(ChannelId ch, const BasisIndex& cancel) {
        const cplx qc = state.at(cancel);
        if (std::abs(qc) <= kSkipTolerance) {
            ++skipped;
            return;
        }
        const auto partner = coupled_partner(ch, cancel, state.j_max);
        if (!partner)
            throw std::logic_error("SequenceBuilder: no coupling for " + to_string(cancel));
        const RabiRegime regime = regime_for(ch);
        const bool cancel_on_upper = cancel.level == upper_level(ch);
        const BasisIndex& source = cancel_on_upper ? *partner : cancel;
        const double rel = relative_rabi(ch, source, regime);
        CancelSolution sol;
        try {
            sol = solve_cancellation(qc, state.at(*partner), rel);
        } catch (const pulse_infeasible& e) {
            throw pulse_infeasible("channel " + std::to_string(static_cast<int>(ch)) +
                                   " pulse cancelling " + to_string(cancel) + ": " + e.what());
        }
        if (cancel_on_upper) sol.theta = reduce_angle(-sol.theta);
        const Pulse p{ch, cancel, sol.theta, sol.base_angle, regime};
        apply_pulse_inplace(state, p);
        pulses.push_back(p);
    }
};

}  // namespace detail

struct BlockResult {
    std::vector<Pulse> pulses;
    int skipped = 0;
};

namespace detail {
template <class Fn>
inline BlockResult run_block(CompositeState& s, const RabiRegime& regime, Fn&& fn) {
    SequenceBuilder b{s, regime, {}, 0};
    fn(b);
    return {std::move(b.pulses), b.skipped};
}
}  // namespace detail

// Concentrate the population of H_J into (J,0,a): alternate exchange pulses
// cancelling (k, J-k, a) with carrier pulses cancelling (k+1, J-k-1, b),
// k ascending.  2J slots.  Expects the de-evolution entry invariant: inside
// H_J, levels b and c are empty except possibly (J,0,b) -- which is what
// clear_auxiliary left behind one recursion step earlier.
inline BlockResult shrink_subspace(int J, CompositeState& s, const RabiRegime& regime) {
    if (J < 1) throw std::invalid_argument("shrink_subspace: J must be >= 1");
    return detail::run_block(s, regime, [J](detail::SequenceBuilder& b) {
        for (int k = 0; k < J; ++k) {
            b.emit(ChannelId::exchange_ab, {k, J - k, Level::a});
            b.emit(ChannelId::carrier_ab, {k + 1, J - k - 1, Level::b});
        }
    });
}

// Sweep all level-b and level-c population of H_J into (J,0,b) so the next
// sideband pulse cannot push population back up.  2J+1 slots, ending with the
// carrier pulse at (J,0,c); (J,0,b) deliberately keeps its amplitude.
inline BlockResult clear_auxiliary(int J, CompositeState& s, const RabiRegime& regime) {
    if (J < 0) throw std::invalid_argument("clear_auxiliary: J must be >= 0");
    return detail::run_block(s, regime, [J](detail::SequenceBuilder& b) {
        for (int k = 0; k <= J; ++k) {
            b.emit(ChannelId::carrier_bc, {k, J - k, Level::c});
            if (k < J) b.emit(ChannelId::exchange_bc, {k, J - k, Level::b});
        }
    });
}

// Move the concentrated component (J,0,a) into (J-1,0,b).  One slot.
inline BlockResult transfer_down(int J, CompositeState& s, const RabiRegime& regime) {
    if (J < 1) throw std::invalid_argument("transfer_down: J must be >= 1");
    return detail::run_block(s, regime, [J](detail::SequenceBuilder& b) {
        b.emit(ChannelId::sideband_ab, {J, 0, Level::a});
    });
}

// Exact slot count of the schedule: 1 + sum_J (2J + 2J-1 + 1) = 1 + 2 j (j+1).
inline std::size_t op_count_expected(int j_max) {
    const std::size_t j = static_cast<std::size_t>(j_max);
    return 1 + 2 * j * (j + 1);
}

inline void apply_sequence_inplace(CompositeState& s, const PulseSequence& seq) {
    for (const Pulse& p : seq.pulses) apply_pulse_inplace(s, p);
}

inline CompositeState apply_sequence(const CompositeState& s, const PulseSequence& seq) {
    CompositeState out = s;
    apply_sequence_inplace(out, seq);
    return out;
}

// Compile the de-evolution sequence mapping |target> (x) |a> to (0,0,a).
inline SynthesisResult de_evolve(const TargetState& t, const RabiRegime& regime = {}) {
    CompositeState s = embed_target(t, Level::a);
    SynthesisResult result;
    result.sequence.direction = Direction::deevolve;
    result.sequence.j_max = s.j_max;

    auto absorb = [&result](BlockResult&& block) {
        auto& dst = result.sequence.pulses;
        dst.insert(dst.end(), block.pulses.begin(), block.pulses.end());
        result.sequence.skipped += block.skipped;
    };

    for (int J = s.j_max; J >= 1; --J) {
        absorb(shrink_subspace(J, s, regime));
        absorb(clear_auxiliary(J - 1, s, regime));
        absorb(transfer_down(J, s, regime));
    }
    // Final carrier pulse folds the last auxiliary component into the vacuum.
    absorb(detail::run_block(s, regime, [](detail::SequenceBuilder& b) {
        b.emit(ChannelId::carrier_ab, {0, 0, Level::b});
    }));

    const cplx vac = s.at({0, 0, Level::a});
    result.residual_vacuum_infidelity = std::max(0.0, 1.0 - std::norm(vac));
    result.global_phase = std::arg(vac);
    if (result.residual_vacuum_infidelity > kVacuumResidualTolerance)
        throw synthesis_error("de_evolve: residual vacuum infidelity " +
                              std::to_string(result.residual_vacuum_infidelity) +
                              " exceeds tolerance");
    return result;
}

// Reverse a de-evolution into a vacuum-to-target preparation sequence.
inline PulseSequence preparation_sequence(const SynthesisResult& r) {
    PulseSequence prep;
    prep.direction = Direction::prepare;
    prep.j_max = r.sequence.j_max;
    prep.skipped = r.sequence.skipped;
    prep.pulses.reserve(r.sequence.pulses.size());
    for (auto it = r.sequence.pulses.rbegin(); it != r.sequence.pulses.rend(); ++it)
        prep.pulses.push_back(inverse(*it));
    return prep;
}

}  // namespace ionsynth
