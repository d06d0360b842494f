#include <doctest.h>

#include <algorithm>

#include "oracles.hpp"
#include "tcwta/generate.hpp"
#include "tcwta/stt_io.hpp"
#include "tcwta/validity.hpp"

using namespace tcwta;

namespace {

struct Spec {
    int color, tsm;
    bool sd, ac;
};

ValidityState make_state(std::initializer_list<Spec> specs) {
    ValidityState q;
    for (const auto& s : specs) {
        q.P |= bit(s.color);
        if (s.sd) q.sd |= bit(s.color);
        if (s.ac) q.ac |= bit(s.color);
        q.tsm[s.color] = static_cast<uint8_t>(s.tsm);
    }
    return q;
}

// Six colored points a c | a b | d ... b realized at 0 2 3 5 5 10.
ValidityState six_point_state() {
    return make_state({{1, 0, true, true},
                       {2, 2, false, true},
                       {3, 3, true, true},
                       {4, 1, false, true},
                       {5, 1, true, false},
                       {6, 2, false, false}});
}
const std::vector<int64_t> kSixPointTimes = {0, 0, 2, 3, 5, 5, 10}; // indexed by color

const char* kTau1 = "add_1_6[2,inf]((1,a) + (6,b))";
const char* kTau2 = "forget_4(succ_3_4(add_2_3[1,3]((2,c) + (3,d)) + succ_4_5(add_4_5[2,3]((4,c) + (5,d)))))";

Term six_point_term() {
    return parse_term(std::string("(rename_3_5(succ_1_2(forget_5(succ_5_6(") + kTau1 + " + " + kTau2 +
                      ")))) + succ_3_4(add_3_4[2,inf]((3,a) + (4,b))))");
}

// a -> b -> c -> d with (b,c) in [2,2] and (a,d) in `outer`.
Term nested_pairs(const std::string& outer) {
    return parse_term("forget_3(forget_2(succ_3_4(succ_1_2(add_1_4" + outer +
                      "((1,a) + (4,d)) + succ_2_3(add_2_3[2,2]((2,b) + (3,c)))))))");
}

} // namespace

TEST_CASE("d, D and AC on the six-point state") {
    const auto q = six_point_state();
    const int M = 4;
    CHECK(AC(q, 1, 5));
    CHECK(d(q, 1, 5, M) == 1);
    CHECK(D(q, 1, 5, M) == 5);
    CHECK_FALSE(AC(q, 2, 6));
    CHECK(d(q, 2, 6, M) == 0);
    CHECK(D(q, 2, 6, M) == 4);
    CHECK(d(q, 3, 3, M) == 0);
    CHECK(D(q, 3, 3, M) == 0);
    CHECK(AC(q, 3, 3));
}

TEST_CASE("abstraction agrees with a realization of the six-point state") {
    const auto q = six_point_state();
    const int M = 4;
    for (int i = 1; i <= 6; ++i) {
        for (int j = i; j <= 6; ++j) {
            const int64_t gap = kSixPointTimes[j] - kSixPointTimes[i];
            CHECK(d(q, i, j, M) == gap % M);
            CHECK(D(q, i, j, M) % M == gap % M);
            CHECK(D(q, i, j, M) <= gap);
            if (AC(q, i, j))
                CHECK(D(q, i, j, M) == gap);
            else
                CHECK(gap >= M);
        }
    }
}

TEST_CASE("delta_atom") {
    auto s = delta_atom(1, 4);
    REQUIRE(s.size() == 4);
    for (int t = 0; t < 4; ++t) {
        CHECK(s[t].P == bit(1));
        CHECK(s[t].sd == 0);
        CHECK(s[t].ac == 0);
        CHECK(s[t].tsm[1] == t);
    }
    CHECK(delta_atom(3, 1).size() == 1);
}

TEST_CASE("unary transitions") {
    const int M = 4;
    const auto q = six_point_state();
    CHECK_FALSE(delta_add_succ(q, 1, 2).has_value());
    auto s = delta_add_succ(q, 2, 3);
    REQUIRE(s);
    CHECK(has(s->sd, 2));
    CHECK_FALSE(delta_add_succ(q, 2, 4).has_value());

    CHECK_FALSE(delta_add_constraint(q, 2, 6, Interval::closed(1, 3), M));
    CHECK(delta_add_constraint(q, 2, 6, Interval::at_least(1), M));
    CHECK(delta_add_constraint(q, 1, 5, Interval::closed(5, 5), M));
    CHECK_FALSE(delta_add_constraint(q, 1, 5, Interval::closed(0, 4), M));
    CHECK_FALSE(delta_add_constraint(q, 5, 1, Interval::at_least(0), M));

    CHECK_FALSE(delta_rename(q, 3, 4).has_value());
    CHECK_FALSE(delta_rename(q, 7, 8).has_value());
    auto r = delta_rename(make_state({{1, 2, true, true}, {5, 3, false, false}}), 5, 9);
    REQUIRE(r);
    CHECK(*r == make_state({{1, 2, true, true}, {9, 3, false, false}}));
}

TEST_CASE("forget recomputes the accuracy bit of the predecessor") {
    const int M = 4;
    auto small = delta_forget(make_state({{1, 0, true, true}, {2, 1, true, true}, {3, 3, false, false}}), 2, M);
    REQUIRE(small);
    CHECK(*small == make_state({{1, 0, true, true}, {3, 3, false, false}}));
    auto big = delta_forget(make_state({{1, 0, true, true}, {2, 3, true, true}, {3, 2, false, false}}), 2, M);
    REQUIRE(big);
    CHECK(*big == make_state({{1, 0, true, false}, {3, 2, false, false}}));
    // Endpoints stay colored.
    CHECK_FALSE(delta_forget(make_state({{1, 0, false, true}, {2, 1, true, true}, {3, 3, false, false}}), 2, M));
    CHECK_FALSE(delta_forget(make_state({{1, 0, true, true}, {2, 1, true, true}}), 2, M));
    CHECK_FALSE(delta_forget(make_state({{2, 1, true, true}, {3, 3, false, false}}), 2, M));
}

TEST_CASE("combine") {
    const int M = 4;
    // A linked pair cannot straddle a foreign color.
    auto straddle = delta_combine(make_state({{1, 0, true, true}, {3, 1, false, false}}), make_state({{2, 0, false, false}}), M);
    CHECK(straddle.empty());
    CHECK_THROWS_AS(delta_combine(make_state({{1, 0, false, false}}), make_state({{1, 0, false, false}}), M), Error);

    auto two = delta_combine(make_state({{1, 0, false, false}}), make_state({{2, 3, false, false}}), M);
    REQUIRE(!two.empty());
    for (const auto& q : two) {
        CHECK(q.P == (bit(1) | bit(2)));
        CHECK_FALSE(has(q.ac, 2));
    }

    // Disjoint ranges: compare against a literal filter over all accuracy guesses.
    const auto q1 = make_state({{1, 0, false, true}, {2, 3, false, false}});
    const auto q2 = make_state({{3, 1, false, false}, {4, 2, false, false}});
    std::vector<ValidityState> expected;
    for (int mask = 0; mask < 16; ++mask) {
        ValidityState q = make_state({{1, 0, false, false}, {2, 3, false, false}, {3, 1, false, false}, {4, 2, false, false}});
        for (int c = 1; c <= 4; ++c)
            if ((mask >> (c - 1)) & 1) q.ac |= bit(c);
        if (has(q.ac, 4)) continue;
        auto accurate = [&](int i, int j) {
            int64_t sum = 0;
            for (int k = i; k < j; ++k) {
                if (!has(q.ac, k)) return false;
                sum += ((q.tsm[k + 1] - q.tsm[k]) % M + M) % M;
            }
            return sum < M;
        };
        if (accurate(1, 2) != true || accurate(3, 4) != false) continue;
        expected.push_back(q);
    }
    auto got = delta_combine(q1, q2, M);
    std::sort(got.begin(), got.end());
    std::sort(expected.begin(), expected.end());
    CHECK(got == expected);
    CHECK(got.size() == 2); // ac(2) is free, ac(1) forced true, ac(3) forced false
}

TEST_CASE("is_accepting") {
    CHECK(is_accepting(make_state({{1, 0, true, false}, {6, 2, false, false}})));
    CHECK_FALSE(is_accepting(make_state({{1, 0, false, false}, {6, 2, false, false}})));
    CHECK(is_accepting(make_state({{2, 1, false, false}})));
    CHECK_FALSE(is_accepting(make_state({{1, 0, true, true}, {2, 0, true, true}, {3, 0, false, false}})));
}

TEST_CASE("the six-point term reaches the hand-built state") {
    const auto t = six_point_term();
    CHECK(is_monotonic(t));
    CHECK(is_km_stt(t, 4, 4));
    auto states = reachable_states(t, 4, 4);
    CHECK(std::find(states.begin(), states.end(), six_point_state()) != states.end());
    for (const auto& q : states) CHECK(q.P == 0b1111110);
    CHECK(reachable_states(t, 3, 4).empty()); // the inner combine has four blocks
    CHECK_FALSE(accepts(t, 4, 4));            // not a whole word
}

TEST_CASE("accepts on small terms") {
    auto mono = parse_term("forget_2(succ_1_2(forget_3(succ_3_4(succ_2_3("
                           "add_1_3[2,inf]((1,a) + (3,c)) + add_2_4[1,3]((2,b) + (4,d)))))))");
    // The combine of the two pairs has four blocks.
    CHECK_FALSE(accepts(mono, 2, 4));
    CHECK_FALSE(oracle::in_valid_language(mono, 2, 4));
    CHECK(accepts(mono, 4, 4));
    CHECK(oracle::in_valid_language(mono, 4, 4));

    auto literal = parse_term("forget_3(succ_1_3(forget_2(succ_2_4(succ_3_2(add_1_2[2,inf]((1,a) + (2,c)) + "
                              "addpair_3_4[1,3]((3,b) + (4,d)))))))");
    CHECK_FALSE(accepts(literal, 2, 4));

    // Inner gap of exactly 2 inside an outer window of at most 1.
    CHECK_FALSE(accepts(nested_pairs("[0,1]"), 3, 4));
    CHECK_FALSE(oracle::in_valid_language(nested_pairs("[0,1]"), 3, 4));
    CHECK(accepts(nested_pairs("[2,3]"), 3, 4));
    CHECK(accepts(nested_pairs("[3,inf]"), 3, 4));
    CHECK_FALSE(accepts(nested_pairs("[2,3]"), 2, 4)); // three blocks after the combine

    CHECK(accepts(atom(1, "a"), 1, 1));
    CHECK_FALSE(accepts(combine(atom(1, "a"), atom(2, "b")), 1, 1));
    CHECK_FALSE(accepts(add_succ(1, 2, combine(atom(1, "a"), atom(2, "b"))), 1, 1));
    CHECK(accepts(add_succ(1, 2, combine(atom(1, "a"), atom(2, "b"))), 2, 1));
}

TEST_CASE("accepts matches the oracle on random monotonic terms") {
    Rng rng(20261014);
    int agree = 0, accepted = 0;
    for (int n = 0; n < 400; ++n) {
        const int K = 1 + n % 3, M = 1 + (n / 3) % 4;
        auto t = random_monotone_term(rng, K, M, 10);
        const bool got = accepts(t, K, M);
        const bool want = oracle::in_valid_language(t, K, M);
        if (got != want) FAIL_CHECK("K=" << K << " M=" << M << " term " << serialize_term(t));
        agree += got == want;
        accepted += got;
    }
    CHECK(agree == 400);
    CHECK(accepted >= 40);
    CHECK(accepted <= 360);
}
