#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <set>

#include "sfols/envs.hpp"
#include "sfols/momdp.hpp"
#include "sfols/rng.hpp"

using namespace sfols;

TEST_CASE("mix64 matches the splitmix64 reference stream") {
    // First three outputs of splitmix64 seeded with 0.
    CHECK(mix64(0) == 0xE220A8397B1DCDAFULL);
    std::uint64_t state = 0x9e3779b97f4a7c15ULL;
    CHECK(mix64(state) == 0x6E789E6AA1B965F4ULL);
    state += 0x9e3779b97f4a7c15ULL;
    CHECK(mix64(state) == 0x06C45D188009454FULL);
}

TEST_CASE("rng streams are deterministic and independent") {
    Rng a(42, 7);
    Rng b(42, 7);
    Rng c(42, 8);
    bool all_equal = true;
    bool any_diff_stream = false;
    for (int i = 0; i < 100; ++i) {
        const double x = a.uniform01();
        all_equal = all_equal && (x == b.uniform01());
        any_diff_stream = any_diff_stream || (x != c.uniform01());
    }
    CHECK(all_equal);
    CHECK(any_diff_stream);
}

TEST_CASE("uniform01 stays in [0,1) with a sane mean") {
    Rng rng(1);
    double sum = 0.0;
    for (int i = 0; i < 20000; ++i) {
        const double x = rng.uniform01();
        REQUIRE(x >= 0.0);
        REQUIRE(x < 1.0);
        sum += x;
    }
    CHECK(std::abs(sum / 20000.0 - 0.5) < 0.02);
}

TEST_CASE("uniform_int covers all residues uniformly enough") {
    Rng rng(3);
    int counts[6] = {0, 0, 0, 0, 0, 0};
    for (int i = 0; i < 6000; ++i) {
        const int k = rng.uniform_int(6);
        REQUIRE(k >= 0);
        REQUIRE(k < 6);
        ++counts[k];
    }
    for (int k = 0; k < 6; ++k) CHECK(counts[k] > 800);
}

TEST_CASE("bernoulli respects the extremes") {
    Rng rng(5);
    for (int i = 0; i < 100; ++i) CHECK_FALSE(rng.bernoulli(0.0));
    for (int i = 0; i < 100; ++i) CHECK(rng.bernoulli(1.0));
}

TEST_CASE("dirichlet_flat lands on the simplex") {
    Rng rng(9);
    for (int trial = 0; trial < 50; ++trial) {
        const Vector w = rng.dirichlet_flat(4);
        REQUIRE(w.size() == 4);
        CHECK(w.minCoeff() >= 0.0);
        CHECK(std::abs(w.sum() - 1.0) < 1e-12);
    }
}

TEST_CASE("weight validation accepts the simplex and rejects the rest") {
    Vector good(2);
    good << 0.3, 0.7;
    const WeightVector w = validate_weight(good);
    CHECK(w.vec() == good);
    CHECK(w.size() == 2);
    CHECK(w[1] == 0.7);

    Vector negative(2);
    negative << -0.1, 1.1;
    CHECK_THROWS_AS(validate_weight(negative), NegativeComponentError);

    Vector short_sum(2);
    short_sum << 0.4, 0.5;
    CHECK_THROWS_AS(validate_weight(short_sum), SumNotOneError);

    // tiny negatives inside the tolerance pass
    Vector barely(2);
    barely << -5e-10, 1.0 + 5e-10;
    CHECK_NOTHROW(validate_weight(barely));

    CHECK_THROWS_AS(WeightVector(Vector{}), DimensionMismatchError);
}

TEST_CASE("weight errors carry the offending vector") {
    Vector bad(2);
    bad << -0.5, 1.5;
    try {
        validate_weight(bad);
        FAIL("expected a throw");
    } catch (const WeightError& e) {
        CHECK(e.offending == bad);
    }
}

TEST_CASE("raw weights only demand finiteness") {
    Vector off(3);
    off << 1.0, -0.1, -0.1;
    CHECK_NOTHROW(RawWeight{off});
    Vector inf(1);
    inf << kInf;
    CHECK_THROWS_AS(RawWeight{inf}, PreconditionError);
}

TEST_CASE("toy model validates and scalarizes linearly") {
    const TabularMOMDP m = make_toy3();
    CHECK(m.num_states == 2);
    CHECK(m.num_actions == 3);
    CHECK(m.d == 2);
    CHECK(m.gamma == 0.0);
    CHECK_NOTHROW(validate_momdp(m));

    Vector w(2);
    w << 0.6, 0.4;
    CHECK(scalarize_reward(m, w, 0, 0, 1) == doctest::Approx(0.6));
    CHECK(scalarize_reward(m, w, 0, 2, 1) == doctest::Approx(0.75 * 0.6 + 0.75 * 0.4));
    // linearity in w
    Vector w2(2);
    w2 << 0.1, 0.9;
    const double mid = scalarize_reward(m, (w + w2) / 2.0, 0, 1, 1);
    CHECK(mid == doctest::Approx((scalarize_reward(m, w, 0, 1, 1) +
                                  scalarize_reward(m, w2, 0, 1, 1)) /
                                 2.0));
    // successor off the support
    CHECK_THROWS_AS(scalarize_reward(m, w, 0, 0, 0), PreconditionError);
    CHECK_THROWS_AS(scalarize_reward(m, Vector::Ones(3), 0, 0, 1),
                    DimensionMismatchError);
}

TEST_CASE("validate_momdp rejects structural corruption") {
    TabularMOMDP m = make_toy3();
    SUBCASE("gamma out of range") {
        m.gamma = 1.0;
        CHECK_THROWS_AS(validate_momdp(m), PreconditionError);
    }
    SUBCASE("probabilities off") {
        m.outcomes(0, 0)[0].prob = 0.5;
        CHECK_THROWS_AS(validate_momdp(m), PreconditionError);
    }
    SUBCASE("initial distribution off") {
        m.initial_dist[0] = 0.9;
        CHECK_THROWS_AS(validate_momdp(m), PreconditionError);
    }
    SUBCASE("terminal state not absorbing") {
        m.outcomes(1, 0)[0].next = 0;
        CHECK_THROWS_AS(validate_momdp(m), PreconditionError);
    }
    SUBCASE("terminal state emits features") {
        m.outcomes(1, 1)[0].phi[0] = 0.5;
        CHECK_THROWS_AS(validate_momdp(m), PreconditionError);
    }
    SUBCASE("successor out of range") {
        m.outcomes(0, 1)[0].next = 5;
        CHECK_THROWS_AS(validate_momdp(m), DimensionMismatchError);
    }
    SUBCASE("feature dimension off") {
        m.outcomes(0, 1)[0].phi = Vector::Zero(3);
        CHECK_THROWS_AS(validate_momdp(m), DimensionMismatchError);
    }
}

TEST_CASE("one_hot_wrap turns features into successor indicators") {
    const TabularMOMDP base = build_random_momdp(11, 4, 2, 3, 0.0, 0.9);
    const TabularMOMDP wrapped = one_hot_wrap(base);
    CHECK(wrapped.d == base.num_states);
    CHECK(wrapped.num_states == base.num_states);
    CHECK_NOTHROW(validate_momdp(wrapped));
    for (int s = 0; s < base.num_states; ++s) {
        for (int a = 0; a < base.num_actions; ++a) {
            const auto& outs = wrapped.outcomes(s, a);
            for (const auto& o : outs) {
                CHECK(o.phi.sum() == 1.0);
                CHECK(o.phi[o.next] == 1.0);
            }
        }
    }
}

TEST_CASE("one_hot_wrap keeps terminal states canonical") {
    const TabularMOMDP base = build_random_momdp(13, 5, 2, 2, 0.5, 0.9);
    const TabularMOMDP wrapped = one_hot_wrap(base);
    CHECK_NOTHROW(validate_momdp(wrapped));
    bool found_terminal = false;
    for (int s = 0; s < wrapped.num_states; ++s) {
        if (!wrapped.is_terminal(s)) continue;
        found_terminal = true;
        const auto& outs = wrapped.outcomes(s, 0);
        REQUIRE(outs.size() == 1);
        CHECK(outs[0].phi.lpNorm<Eigen::Infinity>() == 0.0);
    }
    CHECK(found_terminal);
}

TEST_CASE("feature_norm_max scans every transition") {
    const TabularMOMDP m = make_toy3();
    CHECK(feature_norm_max(m) == doctest::Approx(0.75 * std::sqrt(2.0)));
    const TabularMOMDP dst = build_dst(DSTConfig{});
    CHECK(feature_norm_max(dst) ==
          doctest::Approx(std::sqrt(23.7 * 23.7 + 1.0)));
}
