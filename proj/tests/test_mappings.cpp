#include <doctest.h>

#include <cmath>

#include "famiter/mappings.hpp"
#include "famiter/rng.hpp"

using namespace famiter;

namespace {

Vector axis(int d, double t) {
    Vector v(static_cast<std::size_t>(d), 0.0);
    v[0] = t;
    return v;
}

}  // namespace

TEST_CASE("power_apply: identity and the shift maps") {
    auto id = make_identity(4);
    Vector v{0.1, -0.2, 0.3, 0.0};
    CHECK(power_apply(id, 7, v) == v);

    auto T = make_quartic_shift(4);
    CHECK(power_apply(T, 1, {1.0, 0.0, 0.0, 0.0}) == Vector{0.0, 1.0, 0.0, 0.0});
    // oracle: apply the map twice by hand
    Vector once = T.apply({1.0, 0.0, 0.0, 0.0});
    Vector twice = T.apply(once);
    CHECK(power_apply(T, 2, {1.0, 0.0, 0.0, 0.0}) == twice);
    CHECK(twice == Vector{0.0, 0.0, 1.0, 0.0});
}

TEST_CASE("power_apply: composition law (same composition order)") {
    auto T = make_square_shift(6);
    SplitMix64 rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        long j = 1 + static_cast<long>(rng.next() % 8);
        long k = 1 + static_cast<long>(rng.next() % 8);
        Vector x = sample_in_ball(rng, 6, 1.0);
        CHECK(power_apply(T, j + k, x) == power_apply(T, j, power_apply(T, k, x)));
    }
}

TEST_CASE("power_apply: escaping the domain ball is a zoo error") {
    MappingSpec doubler;
    doubler.apply = [](const Vector& x) { return scale(2.0, x); };
    doubler.domain_radius = 1.0;
    doubler.fixed_points = {Vector(2, 0.0)};
    doubler.label = "doubler";
    CHECK_THROWS_WITH_AS(power_apply(doubler, 3, {0.4, 0.0}), "domain violation",
                         Error);
}

TEST_CASE("zoo: square shift slides coordinates and squares them") {
    auto I = make_square_shift(4);
    Vector out = I.apply({1.0, 0.5, 0.0, 0.0});
    CHECK(out == Vector{0.0, 1.0, 0.25, 0.0});
}

TEST_CASE("zoo: lookup and parametrized names") {
    CHECK(std::holds_alternative<MappingSpec>(zoo("identity", 3)));
    CHECK(std::holds_alternative<MappingSpec>(zoo("paper_T", 8)));
    CHECK(std::holds_alternative<FamilyConfig>(zoo("paper", 8)));
    CHECK(std::holds_alternative<FamilyConfig>(zoo("scaled_family(3)", 4)));

    auto lin = std::get<MappingSpec>(zoo("linear_contraction(0.5)", 2));
    CHECK(lin.apply({2.0, 0.0}) == Vector{1.0, 0.0});

    CHECK_THROWS_AS(zoo("no_such_map", 4), ConfigError);
    CHECK_THROWS_AS(zoo("paper_T", 1), ConfigError);  // shift needs d >= 2
}

TEST_CASE("pair checks: the canonical example is quasi-I but not I-nonexpansive") {
    const int d = 8;
    auto family = make_pair_family(d);
    const auto& T = family.T_family[0];
    const auto& I = family.I_family[0];

    auto quasi = check_quasi_I_nonexpansive(T, I, family.common_F,
                                            AsymptoticRate::one(), 5, 500, 42);
    CHECK(quasi.holds);

    auto pairwise = check_I_nonexpansive(T, I, 500, 42);
    CHECK_FALSE(pairwise.holds);
    // the probe pair (e1, e1/2): ||Tx-Ty|| = 15/16, ||Ix-Iy|| = 3/4
    REQUIRE(pairwise.witness_x.has_value());
    REQUIRE(pairwise.witness_y.has_value());
    double t_gap = distance(T.apply(*pairwise.witness_x), T.apply(*pairwise.witness_y));
    double i_gap = distance(I.apply(*pairwise.witness_x), I.apply(*pairwise.witness_y));
    CHECK(t_gap - i_gap >= 3.0 / 16.0 - 1e-12);
    CHECK(pairwise.worst_violation >= 3.0 / 16.0 - 1e-12);
}

TEST_CASE("pair checks: exact witness pair values") {
    const int d = 4;
    auto T = make_quartic_shift(d);
    auto I = make_square_shift(d);
    Vector x0 = axis(d, 1.0), y0 = axis(d, 0.5);
    CHECK(distance(T.apply(x0), T.apply(y0)) ==
          doctest::Approx(15.0 / 16.0).epsilon(1e-13));
    CHECK(distance(I.apply(x0), I.apply(y0)) ==
          doctest::Approx(3.0 / 4.0).epsilon(1e-13));
}

TEST_CASE("quasi check: identity vs identity holds with zero slack used") {
    auto id = make_identity(3);
    Vector p{0.2, -0.1, 0.4};
    std::vector<Vector> F{p};
    auto report = check_quasi_I_nonexpansive(id, id, F, AsymptoticRate::one(), 3,
                                             200, 7);
    CHECK(report.holds);
    CHECK(report.worst_violation <= 0.0);
}

TEST_CASE("quasi check: x -> 2x against the identity is falsified") {
    MappingSpec doubler;
    doubler.apply = [](const Vector& x) { return scale(2.0, x); };
    doubler.domain_radius = 8.0;  // big enough that powers don't escape
    doubler.fixed_points = {Vector(2, 0.0)};
    doubler.label = "doubler";
    std::vector<Vector> F{Vector(2, 0.0)};
    auto report = check_quasi_I_nonexpansive(doubler, make_identity(2), F,
                                             AsymptoticRate::one(), 1, 100, 3);
    CHECK_FALSE(report.holds);
    CHECK(report.witness_x.has_value());
    CHECK(norm(*report.witness_x) > 0.0);
}

TEST_CASE("I-nonexpansive check: trivial passes") {
    auto id = make_identity(3);
    auto report = check_I_nonexpansive(id, id, 100, 11);
    CHECK(report.holds);

    auto half = make_linear_contraction(3, 0.5);
    CHECK(check_I_nonexpansive(half, id, 100, 11).holds);
}

TEST_CASE("uniform Lipschitz check: identity, halving map, shift map") {
    auto id = make_identity(3);
    CHECK(check_uniform_lipschitz(id, 1.0, 5, 100, 1).holds);

    auto half = make_linear_contraction(3, 0.5);
    CHECK(check_uniform_lipschitz(half, 1.0, 5, 100, 1).holds);
    auto tight = check_uniform_lipschitz(half, 0.4, 5, 100, 1);
    CHECK_FALSE(tight.holds);
    CHECK(tight.witness_power == 1);  // ratio 2^-n <= 0.4 already fails at n = 1

    // sampled pairs in the ball keep the quartic shift within L = 4
    auto T = make_quartic_shift(6);
    CHECK(check_uniform_lipschitz(T, 4.0, 4, 300, 9).holds);
}

TEST_CASE("family_common_rates: pointwise max, dominance, limit") {
    std::vector<MappingSpec> family(2);
    family[0].rate = AsymptoticRate::power(1.0, 1.0);  // 1 + 1/n
    family[1].rate = AsymptoticRate::power(2.0, 1.0);  // 1 + 2/n
    auto common = family_common_rates(family);
    CHECK(common.at(1) == doctest::Approx(3.0).epsilon(1e-15));

    for (long n : {1L, 2L, 5L, 100L, 10000L}) {
        CHECK(common.at(n) >= family[0].rate.at(n));
        CHECK(common.at(n) >= family[1].rate.at(n));
    }
    CHECK(common.at(1000000) == doctest::Approx(1.0).epsilon(1e-3));

    std::vector<MappingSpec> single(1);
    single[0].rate = AsymptoticRate::power(0.5, 2.0);
    CHECK(family_common_rates(single).at(4) == single[0].rate.at(4));

    std::vector<MappingSpec> ones(2);
    auto both_one = family_common_rates(ones);
    CHECK(both_one.at(1) == 1.0);
    CHECK(both_one.decay().kind == TailDecay::Kind::Zero);
}

TEST_CASE("asymptotic rate validation") {
    CHECK_THROWS_AS(AsymptoticRate::power(-1.0, 2.0), ConfigError);
    CHECK_THROWS_AS(AsymptoticRate::power(1.0, 0.0), ConfigError);
    CHECK_THROWS_AS(AsymptoticRate::explicit_values({0.5}), ConfigError);
    CHECK(AsymptoticRate::power(0.5, 2.0).sup() == doctest::Approx(1.5));
    // explicit tail: repeats the last value
    auto e = AsymptoticRate::explicit_values({2.0, 1.5, 1.1});
    CHECK(e.at(3) == 1.1);
    CHECK(e.at(50) == 1.1);
    CHECK(e.sup() == 2.0);
    CHECK(e.decay().kind == TailDecay::Kind::Unknown);
}

TEST_CASE("property: the shift pair satisfies ||Tx|| <= ||Ix|| on the ball") {
    const int d = 8;
    auto T = make_quartic_shift(d);
    auto I = make_square_shift(d);
    SplitMix64 rng(31337);
    for (int trial = 0; trial < 1000; ++trial) {
        Vector x = sample_in_ball(rng, d, 1.0);
        CHECK(norm(T.apply(x)) <= norm(I.apply(x)) + 1e-12);
    }
}

TEST_CASE("validate_family: rejects broken declarations") {
    auto family = make_pair_family(4);
    CHECK_NOTHROW(validate_family(family));

    auto broken = family;
    broken.common_F = {Vector{0.5, 0.0, 0.0, 0.0}};  // not fixed by the shifts
    CHECK_THROWS_AS(validate_family(broken), ConfigError);

    auto empty = family;
    empty.common_F.clear();
    CHECK_THROWS_AS(validate_family(empty), ConfigError);

    auto uneven = family;
    uneven.I_family.push_back(make_identity(4));
    CHECK_THROWS_AS(validate_family(uneven), ConfigError);
}
