#include <catch2/catch.hpp>

#include <cmath>

#include "ionsynth/synth.hpp"
#include "ionsynth/targets.hpp"
#include "test_helpers.hpp"

using namespace ionsynth;

namespace {

// Probability in all subspaces with total quanta >= j_lo.
double mass_at_or_above(const CompositeState& s, int j_lo) {
    const auto p = test::per_j_probability(s);
    double acc = 0.0;
    for (std::size_t j = static_cast<std::size_t>(j_lo); j < p.size(); ++j) acc += p[j];
    return acc;
}

TargetState single_component_target(int m, int n) {
    TargetState t(m, n);
    t.at(m, n) = 1.0;
    return t;
}

}  // namespace

TEST_CASE("solve_cancellation") {
    SECTION("real amplitudes give theta = pi/2 and the arctangent area") {
        const auto sol = solve_cancellation(cplx{0.6, 0.0}, cplx{0.8, 0.0}, 1.0);
        CHECK(sol.theta == Approx(std::numbers::pi / 2.0));
        CHECK(sol.base_angle == Approx(std::atan2(0.6, 0.8)));

        // Apply on a matching two-component state: channel 3 couples
        // (0,1,a) -> (1,0,b) with matrix-element factor 1.
        CompositeState s(1);
        s.at({0, 1, Level::a}) = 0.6;
        s.at({1, 0, Level::b}) = 0.8;
        const Pulse p{ChannelId::exchange_ab, {0, 1, Level::a}, sol.theta, sol.base_angle, {}};
        const CompositeState out = apply_pulse(s, p);
        CHECK(std::abs(out.at({0, 1, Level::a})) < 1e-12);
        CHECK(norm(out) == Approx(1.0).margin(1e-12));
    }
    SECTION("nothing to cancel") {
        const auto sol = solve_cancellation(cplx{0.0, 0.0}, cplx{0.8, 0.2}, 2.0);
        CHECK(sol.theta == 0.0);
        CHECK(sol.base_angle == 0.0);
    }
    SECTION("empty partner means a full transfer") {
        const auto sol = solve_cancellation(cplx{1.0, 0.0}, cplx{0.0, 0.0}, 2.0);
        CHECK(sol.base_angle == Approx(std::numbers::pi / 2.0 / 2.0));
        CHECK(sol.theta == Approx(std::numbers::pi / 2.0));
        // cos(rel * base) Q_cancel - i e^{-i theta} sin(rel * base) Q_partner = 0
        const cplx after = std::cos(2.0 * sol.base_angle) * cplx{1.0, 0.0} -
                           cplx{0.0, 1.0} * std::polar(1.0, -sol.theta) *
                               std::sin(2.0 * sol.base_angle) * cplx{0.0, 0.0};
        CHECK(std::abs(after) < 1e-12);
    }
    SECTION("vanishing matrix element with amplitude left is infeasible") {
        CHECK_THROWS_AS(solve_cancellation(cplx{0.5, 0.0}, cplx{0.1, 0.0}, 0.0),
                        pulse_infeasible);
    }
    SECTION("random cancellations really cancel, on both pair orientations") {
        RngStream rng(314);
        for (int trial = 0; trial < 100; ++trial) {
            CompositeState s = test::random_state(2, rng);
            // lower-level cancel via channel 3 at (0,1,a) <-> (1,0,b)
            {
                const auto sol = solve_cancellation(s.at({0, 1, Level::a}),
                                                    s.at({1, 0, Level::b}), 1.0);
                const Pulse p{ChannelId::exchange_ab, {0, 1, Level::a}, sol.theta,
                              sol.base_angle, {}};
                CHECK(std::abs(apply_pulse(s, p).at({0, 1, Level::a})) < 1e-12);
            }
            // upper-level cancel via channel 1 at (1,1,b): the compiled phase
            // flips sign because the cancel sits in the pair's second slot.
            {
                const auto sol = solve_cancellation(s.at({1, 1, Level::b}),
                                                    s.at({1, 1, Level::a}), 1.0);
                const Pulse p{ChannelId::carrier_ab, {1, 1, Level::b},
                              reduce_angle(-sol.theta), sol.base_angle, {}};
                CHECK(std::abs(apply_pulse(s, p).at({1, 1, Level::b})) < 1e-12);
            }
        }
    }
}

TEST_CASE("shrink_subspace concentrates a subspace at its apex") {
    SECTION("J=1 superposition") {
        TargetState t(1, 1);
        t.at(0, 1) = 1.0 / std::sqrt(2.0);
        t.at(1, 0) = 1.0 / std::sqrt(2.0);
        CompositeState s = embed_target(t, Level::a);
        // embed uses j_max = 2; restrict attention to the J=1 subspace
        const auto block = shrink_subspace(1, s, {});
        CHECK(block.pulses.size() == 2);
        CHECK(block.skipped == 0);
        CHECK(std::abs(s.at({1, 0, Level::a})) == Approx(1.0).margin(1e-10));
        CHECK(std::abs(s.at({0, 1, Level::a})) < 1e-10);
        CHECK(std::abs(s.at({1, 0, Level::b})) < 1e-10);
    }
    SECTION("generic J=3 subspace collapses into (3,0,a)") {
        // Entry invariant of the de-evolution: inside H_3, levels b and c
        // are empty except (3,0,b).  Level a and the lower subspaces are
        // arbitrary.
        RngStream rng(8);
        CompositeState s = test::random_state(3, rng);
        for (int m = 0; m <= 3; ++m) {
            if (m < 3) s.at({m, 3 - m, Level::b}) = 0.0;
            s.at({m, 3 - m, Level::c}) = 0.0;
        }
        {
            const double nrm = norm(s);
            for (cplx& a : s.amp) a /= nrm;
        }
        const auto before = test::per_j_probability(s);

        const auto block = shrink_subspace(3, s, {});
        CHECK(block.pulses.size() + static_cast<std::size_t>(block.skipped) == 6);
        CHECK(block.pulses.size() <= 6);
        for (int m = 0; m <= 3; ++m) {
            const int n = 3 - m;
            for (Level l : {Level::a, Level::b, Level::c}) {
                if (m == 3 && l == Level::a) continue;
                CHECK(std::abs(s.at({m, n, l})) < 1e-10);
            }
        }
        CHECK(std::norm(s.at({3, 0, Level::a})) == Approx(before[3]).margin(1e-10));
    }
    SECTION("empty subspace is all skips") {
        CompositeState s = vacuum_state(4);
        const auto block = shrink_subspace(4, s, {});
        CHECK(block.pulses.empty());
        CHECK(block.skipped == 8);
    }
}

TEST_CASE("clear_auxiliary empties levels b and c of a subspace") {
    SECTION("J=0 is a single slot") {
        CompositeState s(1);
        s.at({0, 0, Level::c}) = 0.6;
        s.at({0, 0, Level::b}) = 0.8;
        const auto block = clear_auxiliary(0, s, {});
        CHECK(block.pulses.size() + static_cast<std::size_t>(block.skipped) == 1);
        CHECK(std::abs(s.at({0, 0, Level::c})) < 1e-10);
        CHECK(std::abs(s.at({0, 0, Level::b})) == Approx(1.0).margin(1e-10));
    }
    SECTION("J=2 uses five slots and leaves only (2,0,b) and level a") {
        RngStream rng(77);
        CompositeState s = test::random_state(3, rng);
        const auto block = clear_auxiliary(2, s, {});
        CHECK(block.pulses.size() + static_cast<std::size_t>(block.skipped) == 5);
        for (int m = 0; m <= 2; ++m) {
            const int n = 2 - m;
            CHECK(std::abs(s.at({m, n, Level::c})) < 1e-10);
            if (m < 2) CHECK(std::abs(s.at({m, n, Level::b})) < 1e-10);
        }
    }
    SECTION("no auxiliary population means every slot is skipped") {
        RngStream rng(78);
        TargetState t = test::random_target(1, 1, rng);
        CompositeState s = embed_target(t, Level::a);
        const auto block = clear_auxiliary(2, s, {});
        CHECK(block.pulses.empty());
        CHECK(block.skipped == 5);
    }
}

TEST_CASE("transfer_down moves the apex into the next subspace") {
    SECTION("full transfer of (1,0,a)") {
        CompositeState s(1);
        s.at({1, 0, Level::a}) = 1.0;
        const auto block = transfer_down(1, s, {});
        CHECK(block.pulses.size() == 1);
        CHECK(std::abs(s.at({1, 0, Level::a})) < 1e-10);
        CHECK(std::abs(s.at({0, 0, Level::b})) == Approx(1.0).margin(1e-10));
    }
    SECTION("generic J=3 apex emits exactly one pulse") {
        RngStream rng(12);
        CompositeState s = test::random_state(3, rng);
        shrink_subspace(3, s, {});
        clear_auxiliary(2, s, {});
        const auto block = transfer_down(3, s, {});
        CHECK(block.pulses.size() == 1);
        CHECK(std::abs(s.at({3, 0, Level::a})) < 1e-10);
    }
    SECTION("empty apex is skipped") {
        CompositeState s = vacuum_state(2);
        const auto block = transfer_down(2, s, {});
        CHECK(block.pulses.empty());
        CHECK(block.skipped == 1);
    }
}

TEST_CASE("de_evolve drives targets into the vacuum") {
    SECTION("vacuum target needs no pulses") {
        const auto r = de_evolve(single_component_target(0, 0));
        CHECK(r.sequence.pulses.empty());
        CHECK(r.sequence.skipped == 1);
        CHECK(r.residual_vacuum_infidelity == 0.0);
    }
    SECTION("hand-traceable J_max=1 case") {
        TargetState t(1, 1);
        t.at(0, 1) = 1.0 / std::sqrt(2.0);
        t.at(1, 0) = 1.0 / std::sqrt(2.0);
        const auto r = de_evolve(t);
        CHECK(r.sequence.slots() == op_count_expected(2));
        CHECK(r.residual_vacuum_infidelity <= 1e-12);
    }
    SECTION("random targets terminate in the vacuum") {
        RngStream rng(1000);
        for (int seed = 0; seed < 100; ++seed) {
            const TargetState t = test::random_target(3, 3, rng);
            const auto r = de_evolve(t);
            CHECK(r.residual_vacuum_infidelity <= 1e-10);
            CHECK(r.sequence.slots() == op_count_expected(6));
        }
    }
    SECTION("support shrinks monotonically, one subspace per block") {
        RngStream rng(4);
        const TargetState t = test::random_target(2, 2, rng);
        CompositeState s = embed_target(t, Level::a);
        for (int J = s.j_max; J >= 1; --J) {
            shrink_subspace(J, s, {});
            clear_auxiliary(J - 1, s, {});
            transfer_down(J, s, {});
            CHECK(mass_at_or_above(s, J) <= 1e-10);
        }
    }
    SECTION("every emitted pulse cancels its component at emission time") {
        RngStream rng(21);
        const TargetState t = test::random_target(2, 3, rng);
        const auto r = de_evolve(t);
        CompositeState s = embed_target(t, Level::a);
        for (const Pulse& p : r.sequence.pulses) {
            apply_pulse_inplace(s, p);
            CHECK(std::abs(s.at(p.cancel)) < 1e-12);
        }
    }
    SECTION("the reported global phase is the final vacuum phase") {
        RngStream rng(3);
        const TargetState t = test::random_target(2, 2, rng);
        const auto r = de_evolve(t);
        CompositeState s = embed_target(t, Level::a);
        apply_sequence_inplace(s, r.sequence);
        CHECK(std::arg(s.at({0, 0, Level::a})) == Approx(r.global_phase).margin(1e-12));
    }
}

TEST_CASE("preparation_sequence reverses the de-evolution") {
    SECTION("empty in, empty out") {
        const auto r = de_evolve(single_component_target(0, 0));
        const PulseSequence prep = preparation_sequence(r);
        CHECK(prep.direction == Direction::prepare);
        CHECK(prep.pulses.empty());
    }
    SECTION("round trip on the J_max=1 superposition") {
        TargetState t(1, 1);
        t.at(0, 1) = 1.0 / std::sqrt(2.0);
        t.at(1, 0) = 1.0 / std::sqrt(2.0);
        const PulseSequence prep = preparation_sequence(de_evolve(t));
        CompositeState s = vacuum_state(prep.j_max);
        apply_sequence_inplace(s, prep);
        CHECK(fidelity_single(s, t, Level::a) >= 1.0 - 1e-10);
    }
    SECTION("round trip on a cat target") {
        const TargetState t = cat_state(cplx{2.0, 0.0}, 6, 6);
        const PulseSequence prep = preparation_sequence(de_evolve(t));
        CompositeState s = vacuum_state(prep.j_max);
        apply_sequence_inplace(s, prep);
        CHECK(fidelity_single(s, t, Level::a) >= 1.0 - 1e-9);
    }
    SECTION("round trips on random targets") {
        RngStream rng(555);
        for (int trial = 0; trial < 25; ++trial) {
            const TargetState t = test::random_target(3, 3, rng);
            const auto r = de_evolve(t);
            const PulseSequence prep = preparation_sequence(r);
            CHECK(prep.pulses.size() == r.sequence.pulses.size());
            CompositeState s = vacuum_state(prep.j_max);
            apply_sequence_inplace(s, prep);
            CHECK(fidelity_single(s, t, Level::a) >= 1.0 - 1e-9);
        }
    }
    SECTION("prepared pulses are the phase-flipped mirror of the de-evolution") {
        RngStream rng(31);
        const TargetState t = test::random_target(2, 1, rng);
        const auto r = de_evolve(t);
        const PulseSequence prep = preparation_sequence(r);
        const std::size_t count = r.sequence.pulses.size();
        for (std::size_t i = 0; i < count; ++i) {
            const Pulse& fwd = r.sequence.pulses[count - 1 - i];
            const Pulse& rev = prep.pulses[i];
            CHECK(rev.channel == fwd.channel);
            CHECK(rev.cancel == fwd.cancel);
            CHECK(rev.base_angle == fwd.base_angle);
            CHECK(rev.theta == Approx(reduce_angle(fwd.theta + std::numbers::pi)));
        }
    }
}

TEST_CASE("nonlinear-regime synthesis carries the regime on exchange pulses only") {
    RngStream rng(87);
    const TargetState t = test::random_target(2, 2, rng);
    const RabiRegime nl = RabiRegime::nonlinear(0.12, 0.09);
    const auto r = de_evolve(t, nl);
    CHECK(r.residual_vacuum_infidelity <= 1e-10);
    bool saw_exchange = false;
    for (const Pulse& p : r.sequence.pulses) {
        if (p.channel == ChannelId::exchange_ab || p.channel == ChannelId::exchange_bc) {
            CHECK(p.regime == nl);
            saw_exchange = true;
        } else {
            CHECK(p.regime == RabiRegime::lamb_dicke());
        }
    }
    CHECK(saw_exchange);
    const PulseSequence prep = preparation_sequence(r);
    CompositeState s = vacuum_state(prep.j_max);
    apply_sequence_inplace(s, prep);
    CHECK(fidelity_single(s, t, Level::a) >= 1.0 - 1e-9);
}

TEST_CASE("op_count_expected matches the schedule exactly") {
    CHECK(op_count_expected(0) == 1);
    CHECK(op_count_expected(1) == 5);
    CHECK(op_count_expected(24) == 1201);

    SECTION("synthesized slot accounting equals the closed form") {
        RngStream rng(64);
        for (int j : {2, 5, 8}) {
            const int m_max = j / 2;
            const TargetState t = test::random_target(m_max, j - m_max, rng);
            const auto r = de_evolve(t);
            CHECK(r.sequence.slots() == op_count_expected(j));
        }
    }
    SECTION("slot count approaches 2 j_max^2 from above") {
        double prev = 10.0;
        for (int j : {8, 16, 32, 64}) {
            const double ratio =
                static_cast<double>(op_count_expected(j)) / (2.0 * j * j);
            CHECK(ratio > 1.0);
            CHECK(ratio < prev);
            CHECK(ratio - 1.0 <= 1.0 / j + 1.0 / (2.0 * j * j) + 1e-12);
            prev = ratio;
        }
    }
}
