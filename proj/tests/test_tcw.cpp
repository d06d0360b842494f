#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "tcwta/tcw.hpp"
#include "tcwta/tcw_io.hpp"

using namespace tcwta;

namespace {

Stcw chain(std::vector<std::string> labels, std::vector<Constraint> cs) {
    Stcw w;
    w.labels = std::move(labels);
    w.constraints = std::move(cs);
    return w;
}

Constraint con(int s, int t, int64_t lo, int64_t up, Owner o = {}) { return {s, t, Interval{lo, up}, std::move(o)}; }
constexpr int64_t INF = Interval::kInf;

RawGraph raw_chain(int n) {
    RawGraph g;
    for (int i = 0; i < n; ++i) g.positions.push_back({i, std::string(1, static_cast<char>('a' + i))});
    for (int i = 0; i + 1 < n; ++i) g.succ.emplace_back(i, i + 1);
    return g;
}

} // namespace

TEST_CASE("validate_tcw accepts a chain and orders positions") {
    auto g = raw_chain(3);
    g.constraints.push_back(con(0, 2, 1, 2));
    auto w = validate_tcw(g);
    CHECK(w.size() == 3);
    CHECK(w.width() == 1);
    REQUIRE(w.word.constraints.size() == 1);
    CHECK(w.word.constraints[0].src == 0);
    CHECK(w.word.constraints[0].tgt == 2);
}

TEST_CASE("validate_tcw renumbers ids in chain order") {
    RawGraph g;
    g.positions = {{7, "b"}, {3, "a"}, {9, "c"}};
    g.succ = {{3, 7}, {7, 9}};
    g.constraints.push_back(con(3, 9, 0, 0));
    auto w = validate_tcw(g);
    CHECK(w.word.labels == std::vector<std::string>{"a", "b", "c"});
    CHECK(w.origin == std::vector<int>{3, 7, 9});
    CHECK(w.word.constraints[0].src == 0);
    CHECK(w.word.constraints[0].tgt == 2);
}

TEST_CASE("validate_tcw rejects branching, cycles and disconnection") {
    auto g = raw_chain(3);
    g.succ = {{0, 1}, {0, 2}};
    CHECK_THROWS_AS(validate_tcw(g), Error);
    try {
        validate_tcw(g);
    } catch (const Error& e) {
        CHECK(e.code() == Errc::NotLinear);
    }
    auto cyc = raw_chain(3);
    cyc.succ.emplace_back(2, 0);
    CHECK_THROWS_AS(validate_tcw(cyc), Error);
    auto gap = raw_chain(3);
    gap.succ.pop_back();
    CHECK_THROWS_AS(validate_tcw(gap), Error);
}

TEST_CASE("validate_tcw rejects backward constraints") {
    auto g = raw_chain(2);
    g.constraints.push_back(con(1, 0, 0, 0));
    try {
        validate_tcw(g);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::BackwardConstraint);
    }
}

TEST_CASE("is_simple") {
    // Five positions; 1 has one outgoing edge, 4 one incoming, 3 none.
    CHECK(is_simple(chain({"a", "b", "a", "b", "a"}, {con(0, 3, 1, 2), con(1, 4, 0, 1)})));
    CHECK(is_simple(chain({"a"}, {})));
    CHECK_FALSE(is_simple(chain({"a", "b", "c"}, {con(0, 1, 0, 1), con(0, 2, 0, 2)})));
}

TEST_CASE("realize returns the canonical shortest-path solution") {
    auto r = realize(chain({"a", "b"}, {con(0, 1, 1, 2)}));
    REQUIRE(std::holds_alternative<TimestampMap>(r));
    CHECK(std::get<TimestampMap>(r) == TimestampMap{0, 1});
}

TEST_CASE("realize reports a negative cycle") {
    auto w = chain({"a", "b", "c"}, {con(0, 2, 2, 2), con(1, 2, 0, 0), con(0, 1, 0, 1)});
    CHECK_FALSE(oracle::brute_force_realizable(w, 4));
    auto r = realize(w);
    REQUIRE(std::holds_alternative<Unrealizable>(r));
    const auto& cyc = std::get<Unrealizable>(r).cycle;
    REQUIRE_FALSE(cyc.empty());
    int64_t total = 0;
    for (size_t i = 0; i < cyc.size(); ++i) {
        total += cyc[i].weight;
        CHECK(cyc[i].to == cyc[(i + 1) % cyc.size()].from);
    }
    CHECK(total < 0);
}

TEST_CASE("realize on the four-letter example word") {
    auto w = chain({"a", "b", "c", "d"}, {con(0, 2, 2, INF), con(1, 3, 1, 3)});
    CHECK(oracle::brute_force_realizable(w, 4));
    CHECK(satisfies(w, {0, 1, 2, 3}));
    auto r = realize(w);
    REQUIRE(std::holds_alternative<TimestampMap>(r));
    CHECK(satisfies(w, std::get<TimestampMap>(r)));
}

TEST_CASE("realize agrees with gap enumeration on random small words") {
    std::mt19937 rng(12345);
    const int64_t M = 4;
    int disagreements = 0;
    for (int iter = 0; iter < 3000; ++iter) {
        const int n = 1 + static_cast<int>(rng() % 6);
        Stcw w;
        w.labels.assign(n, "a");
        const int nc = n > 1 ? static_cast<int>(rng() % 4) : 0;
        for (int c = 0; c < nc; ++c) {
            int s = static_cast<int>(rng() % (n - 1));
            int t = s + 1 + static_cast<int>(rng() % (n - 1 - s));
            int64_t lo = rng() % M;
            int64_t up = (rng() % 3 == 0) ? INF : lo + static_cast<int64_t>(rng() % (M - lo));
            w.constraints.push_back(con(s, t, lo, up));
        }
        auto r = realize(w);
        const bool ok = std::holds_alternative<TimestampMap>(r);
        if (ok != oracle::brute_force_realizable(w, M)) ++disagreements;
        if (ok) CHECK(satisfies(w, std::get<TimestampMap>(r)));
        if (ok) CHECK(check_realization(w, timed_word(w, std::get<TimestampMap>(r))));
    }
    CHECK(disagreements == 0);
}

TEST_CASE("check_realization") {
    auto w = chain({"a", "b"}, {con(0, 1, 1, 2)});
    CHECK(check_realization(w, {{"a", 0.9}, {"b", 2.1}}));
    CHECK_FALSE(check_realization(w, {{"a", 0.0}, {"b", 3.0}}));
    auto eps = chain({"a", "", "b"}, {con(1, 2, 0, 0)});
    CHECK(check_realization(eps, {{"a", 0}, {"b", 5}}));
    try {
        check_realization(w, {{"b", 0}, {"a", 1}});
        FAIL("expected LabelMismatch");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::LabelMismatch);
    }
}

TEST_CASE("blocks and endpoints") {
    auto whole = SplitStcw::whole(chain({"a", "b", "c", "d"}, {}));
    CHECK(blocks(whole).size() == 1);
    CHECK(whole.width() == 1);
    auto split = whole;
    split.hole[1] = true;
    CHECK(blocks(split) == std::vector<Block>{{0, 1}, {2, 3}});
    CHECK(endpoints(split) == std::set<int>{0, 1, 2, 3});
    auto pair = SplitStcw::whole(chain({"a", "b"}, {con(0, 1, 0, 1)}));
    pair.hole[0] = true;
    CHECK(pair.width() == 2);
    CHECK(endpoints(pair) == std::set<int>{0, 1});
    CHECK(is_atomic(pair));
}

TEST_CASE("check_well_timed") {
    const std::set<std::string> xy{"x", "y"};
    SUBCASE("nested stack edges and closest reset blocks") {
        // x reset block {1,2} checked at 5 and 4; y reset at 3 checked at 6; stack 0->7.
        auto w = chain({"a", "", "", "", "", "", "", "b"},
                       {con(0, 7, 0, INF, Owner::of_stack(1)), con(1, 5, 0, 2, Owner::of_clock("x")),
                        con(2, 4, 1, 1, Owner::of_clock("x")), con(3, 6, 0, INF, Owner::of_clock("y"))});
        auto r = check_well_timed(w, xy, 1, 1);
        REQUIRE(std::holds_alternative<RoundPartition>(r));
        CHECK(std::get<RoundPartition>(r).rounds == 1);
    }
    SUBCASE("crossing stack edges") {
        auto w = chain({"a", "a", "b", "b", "b", "b"},
                       {con(1, 4, 0, INF, Owner::of_stack(1)), con(2, 5, 0, INF, Owner::of_stack(1))});
        auto r = check_well_timed(w, xy, 1, 1);
        REQUIRE(std::holds_alternative<WellTimedViolation>(r));
        CHECK(std::get<WellTimedViolation>(r).kind == WellTimedViolation::Kind::StackCrossing);
    }
    SUBCASE("check skipping a later reset block") {
        // x reset at 0 is checked at 3, after the later reset at 2.
        auto w = chain({"", "", "", "", ""}, {con(0, 3, 0, INF, Owner::of_clock("x")), con(2, 4, 0, 0, Owner::of_clock("x"))});
        auto r = check_well_timed(w, xy, 0, 1);
        REQUIRE(std::holds_alternative<WellTimedViolation>(r));
        CHECK(std::get<WellTimedViolation>(r).kind == WellTimedViolation::Kind::ClockMatchViolation);
    }
    SUBCASE("rounds") {
        // stack 2 then stack 1: two rounds.
        auto w = chain({"a", "b", "c", "d"}, {con(0, 1, 0, INF, Owner::of_stack(2)), con(2, 3, 0, INF, Owner::of_stack(1))});
        auto r1 = check_well_timed(w, {}, 2, 1);
        REQUIRE(std::holds_alternative<WellTimedViolation>(r1));
        CHECK(std::get<WellTimedViolation>(r1).kind == WellTimedViolation::Kind::TooManyRounds);
        auto r2 = check_well_timed(w, {}, 2, 2);
        REQUIRE(std::holds_alternative<RoundPartition>(r2));
        const auto& p = std::get<RoundPartition>(r2);
        CHECK(p.rounds == 2);
        CHECK(p.segments == std::vector<Segment>{{1, 2, 0, 1}, {2, 1, 2, 3}});
    }
}

TEST_CASE("STCW JSON round trip") {
    auto w = SplitStcw::whole(chain({"a", "", "b"}, {con(0, 2, 1, INF, Owner::of_clock("x"))}));
    w.hole[0] = true;
    auto j = stcw_to_json(w);
    auto back = stcw_from_json(j);
    CHECK(back.word == w.word);
    CHECK(back.hole == w.hole);
    CHECK(stcw_to_json(back) == j);
    CHECK(stcw_to_dot(w) == stcw_to_dot(back));
}
