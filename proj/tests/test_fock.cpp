#include <catch2/catch.hpp>

#include <set>

#include "ionsynth/fock.hpp"
#include "ionsynth/targets.hpp"
#include "test_helpers.hpp"

using namespace ionsynth;

TEST_CASE("dim counts the triangular lattice times three levels") {
    CHECK(dim(0) == 3);
    CHECK(dim(1) == 9);
    CHECK(dim(3) == 30);
    CHECK(dim(24) == 3 * 25 * 26 / 2);
}

TEST_CASE("index_of / inverse_index round-trip over every basis vector") {
    for (int j_max = 0; j_max <= 12; ++j_max) {
        std::set<std::size_t> seen;
        for (int m = 0; m <= j_max; ++m) {
            for (int n = 0; m + n <= j_max; ++n) {
                for (Level l : {Level::a, Level::b, Level::c}) {
                    const BasisIndex b{m, n, l};
                    const std::size_t off = index_of(b, j_max);
                    REQUIRE(off < dim(j_max));
                    REQUIRE(seen.insert(off).second);  // distinct offsets
                    REQUIRE(inverse_index(off, j_max) == b);
                }
            }
        }
        REQUIRE(seen.size() == dim(j_max));
    }
}

TEST_CASE("index_of specific placements and errors") {
    CHECK(index_of({0, 0, Level::a}, 1) == 0);
    const std::size_t off = index_of({2, 1, Level::c}, 3);
    CHECK(inverse_index(off, 3) == BasisIndex{2, 1, Level::c});
    CHECK_THROWS_AS(index_of({2, 2, Level::a}, 3), std::out_of_range);
    CHECK_THROWS_AS(index_of({-1, 0, Level::a}, 3), std::out_of_range);
    CHECK_THROWS_AS(inverse_index(dim(3), 3), std::out_of_range);
}

TEST_CASE("embed_target places coefficients on one level") {
    SECTION("vacuum") {
        TargetState t(0, 0);
        t.at(0, 0) = 1.0;
        const CompositeState s = embed_target(t, Level::a);
        CHECK(s.j_max == 0);
        CHECK(s.at({0, 0, Level::a}) == cplx{1.0, 0.0});
    }
    SECTION("two-component superposition") {
        TargetState t(1, 1);
        t.at(1, 0) = 1.0 / std::sqrt(2.0);
        t.at(0, 1) = 1.0 / std::sqrt(2.0);
        const CompositeState s = embed_target(t, Level::a);
        CHECK(s.j_max == 2);
        CHECK(std::abs(s.at({1, 0, Level::a}) - 1.0 / std::sqrt(2.0)) < 1e-15);
        CHECK(std::abs(s.at({0, 1, Level::a}) - 1.0 / std::sqrt(2.0)) < 1e-15);
    }
    SECTION("cat target keeps unit norm and level-a support") {
        const TargetState t = cat_state(cplx{2.0, 0.0}, 4, 4);
        const CompositeState s = embed_target(t, Level::a);
        CHECK(norm(s) == Approx(1.0).margin(1e-12));
        for (std::size_t i = 0; i < s.amp.size(); ++i) {
            const BasisIndex b = inverse_index(i, s.j_max);
            if (b.level != Level::a) CHECK(s.amp[i] == cplx{0.0, 0.0});
        }
    }
    SECTION("norm preserved for random targets") {
        RngStream rng(11);
        for (int trial = 0; trial < 20; ++trial) {
            const TargetState t = test::random_target(3, 2, rng);
            CHECK(norm(embed_target(t, Level::b)) == Approx(1.0).margin(1e-12));
        }
    }
}

TEST_CASE("overlap behaves as an inner product") {
    RngStream rng(23);
    const CompositeState s = test::random_state(3, rng);

    SECTION("self-overlap of a normalized state is one") {
        CHECK(overlap(s, s).real() == Approx(1.0).margin(1e-12));
        CHECK(overlap(s, s).imag() == Approx(0.0).margin(1e-12));
    }
    SECTION("orthogonal basis states") {
        CompositeState e1(2), e2(2);
        e1.at({0, 1, Level::a}) = 1.0;
        e2.at({1, 0, Level::a}) = 1.0;
        CHECK(std::abs(overlap(e1, e2)) == 0.0);
    }
    SECTION("projection onto a basis state") {
        CompositeState sup(1), basis(1);
        sup.at({0, 0, Level::a}) = 1.0 / std::sqrt(2.0);
        sup.at({1, 0, Level::a}) = 1.0 / std::sqrt(2.0);
        basis.at({1, 0, Level::a}) = 1.0;
        CHECK(std::abs(overlap(sup, basis) - 1.0 / std::sqrt(2.0)) < 1e-15);
    }
    SECTION("dimension mismatch is rejected") {
        CHECK_THROWS_AS(overlap(CompositeState(2), CompositeState(3)), std::invalid_argument);
    }
    SECTION("conjugate symmetry, sesquilinearity, Cauchy-Schwarz") {
        for (int trial = 0; trial < 25; ++trial) {
            const CompositeState x = test::random_state(3, rng);
            const CompositeState y = test::random_state(3, rng);
            const cplx xy = overlap(x, y);
            CHECK(std::abs(xy - std::conj(overlap(y, x))) < 1e-12);
            CHECK(std::abs(xy) <= norm(x) * norm(y) + 1e-12);

            const cplx alpha{0.3, -0.7};
            CompositeState ys = y;
            for (cplx& a : ys.amp) a *= alpha;
            CHECK(std::abs(overlap(x, ys) - alpha * xy) < 1e-12);
            CompositeState xs = x;
            for (cplx& a : xs.amp) a *= alpha;
            CHECK(std::abs(overlap(xs, y) - std::conj(alpha) * xy) < 1e-12);
        }
    }
}

TEST_CASE("fidelity_single against an embedded target") {
    RngStream rng(31);
    const TargetState t = test::random_target(2, 2, rng);
    SECTION("perfect preparation") {
        CHECK(fidelity_single(embed_target(t, Level::a), t, Level::a) ==
              Approx(1.0).margin(1e-12));
    }
    SECTION("orthogonal state") {
        CompositeState s(4);
        s.at({0, 0, Level::c}) = 1.0;  // target has no level-c support
        CHECK(fidelity_single(s, t, Level::a) == Approx(0.0).margin(1e-15));
    }
    SECTION("state triangle must contain the target") {
        CHECK_THROWS_AS(fidelity_single(CompositeState(2), t, Level::a), std::invalid_argument);
    }
}

TEST_CASE("mean_quanta") {
    SECTION("vacuum") {
        CHECK(mean_quanta(vacuum_state(3)) == 0.0);
    }
    SECTION("single Fock component") {
        CompositeState s(5);
        s.at({2, 3, Level::b}) = 1.0;
        CHECK(mean_quanta(s) == Approx(5.0).margin(1e-15));
    }
    SECTION("correlated state approaches the analytic value 2|alpha|^2") {
        const TargetState t = correlated_state(cplx{2.0, 0.0}, 60);
        CHECK(mean_quanta(embed_target(t, Level::a)) == Approx(8.0).margin(1e-9));
    }
    SECTION("embedding preserves the rectangle moment") {
        RngStream rng(47);
        const TargetState t = test::random_target(3, 3, rng);
        double expected = 0.0;
        for (int m = 0; m <= 3; ++m)
            for (int n = 0; n <= 3; ++n) expected += std::norm(t.at(m, n)) * (m + n);
        CHECK(mean_quanta(embed_target(t, Level::a)) == Approx(expected).margin(1e-12));
    }
}
