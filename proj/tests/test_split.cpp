#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "oracles.hpp"
#include "tcwta/generate.hpp"
#include "tcwta/split.hpp"
#include "tcwta/stt_io.hpp"
#include "tcwta/validity.hpp"

using namespace tcwta;

namespace {

int blocks_of(const SplitStcw& w) {
    int h = 0;
    for (bool b : w.hole) h += b ? 1 : 0;
    return w.size() == 0 ? 0 : h + 1;
}

// Edge (p, p+1) present in w, by root positions.
bool has_succ(const SplitStcw& w, int k) { return !w.hole[k]; }

// Checks the node-kind rules of every node, recomputing them from labels.
void check_tree(const SplitTree& T, const Stcw& root) {
    REQUIRE(T.root >= 0);
    const auto& top = T.at(T.root).label;
    CHECK(top.word == root);
    CHECK(blocks_of(top) == 1);
    int worst = 0;
    for (const auto& n : T.nodes) {
        const auto& L = n.label;
        worst = std::max(worst, blocks_of(L));
        REQUIRE(L.origin.size() == static_cast<size_t>(L.size()));
        if (n.kind == SplitNode::Kind::Leaf) {
            const bool single = L.size() == 1;
            const bool pair = L.size() == 2 && L.hole[0] && L.word.constraints.size() == 1;
            CHECK((single || pair));
            continue;
        }
        if (n.kind == SplitNode::Kind::Unary) {
            const auto& C = T.at(n.left).label;
            REQUIRE(C.origin == L.origin);
            CHECK(C.word == L.word);
            int removed = 0;
            for (size_t k = 0; k < L.hole.size(); ++k) {
                if (L.hole[k]) CHECK(C.hole[k]);
                else if (C.hole[k]) {
                    ++removed;
                    CHECK(L.origin[k] == n.cut);
                }
            }
            CHECK(removed == 1);
            CHECK(blocks_of(C) == blocks_of(L) + 1);
            continue;
        }
        const auto& A = T.at(n.left).label;
        const auto& B = T.at(n.right).label;
        std::map<int, int> side; // root position -> 0 left, 1 right
        for (int p : A.origin) side[p] = 0;
        for (int p : B.origin) CHECK(side.emplace(p, 1).second);
        std::vector<int> all(L.origin);
        std::vector<int> both;
        for (const auto& [p, _] : side) both.push_back(p);
        CHECK(both == all);
        for (size_t k = 0; k < L.hole.size(); ++k)
            if (has_succ(L, static_cast<int>(k))) CHECK(side[L.origin[k]] == side[L.origin[k + 1]]);
        for (const auto& c : L.word.constraints) CHECK(side[L.origin[c.src]] == side[L.origin[c.tgt]]);
        CHECK(A.word.constraints.size() + B.word.constraints.size() == L.word.constraints.size());
        CHECK(blocks_of(A) + blocks_of(B) == blocks_of(L));
        CHECK(A.origin.front() < B.origin.front());
    }
    CHECK(T.width() == worst);
}

// eval(term) is the word, and only its two ends are colored.
void check_round_trip(const Term& t, const Stcw& w, int K, int M) {
    CHECK(is_monotonic(t));
    CHECK(is_km_stt(t, K, M));
    const auto lin = linearize(eval(t));
    CHECK(lin.word.word == w);
    for (bool h : lin.word.hole) CHECK_FALSE(h);
    std::set<int> ends;
    for (const auto& [c, p] : lin.colored) ends.insert(p);
    CHECK(ends == (w.size() == 1 ? std::set<int>{0} : std::set<int>{0, w.size() - 1}));
}

TimedSystem load_model(const std::string& name) {
    std::ifstream f(std::filesystem::path(TCWTA_MODELS_DIR) / (name + ".json"));
    REQUIRE(f.good());
    return system_from_json(json::parse(f));
}

std::set<std::string> clock_set(const TimedSystem& S) { return {S.clocks.begin(), S.clocks.end()}; }

SplitTree decompose_for(const TimedSystem& S, const Stcw& w) {
    switch (S.kind) {
    case ModelKind::TA: return decompose_ta(w);
    case ModelKind::TPDA: return decompose_tpda(w);
    case ModelKind::DTMPDA: return decompose_mpda(w, S.stacks, S.rounds);
    }
    return {};
}

struct ClassCase {
    ModelKind kind;
    int clocks, stacks, rounds;
};

} // namespace

TEST_CASE("required widths") {
    CHECK(required_width(ModelKind::TA, 2) == 6);
    CHECK(required_width(ModelKind::TPDA, 1) == 10);
    CHECK(required_width(ModelKind::DTMPDA, 1, 2, 2) == 20);
    CHECK(required_width(ModelKind::DTMPDA, 0, 2, 1) == 9);
    CHECK(alternative_mpda_width(1, 2, 2) == (4 * 2 * 2 + 4) * 3);
}

TEST_CASE("single point decomposes to an atom") {
    Stcw w;
    w.labels = {"a"};
    const auto T = decompose_ta(w);
    CHECK(T.width() == 1);
    CHECK(T.at(T.root).kind == SplitNode::Kind::Leaf);
    CHECK(serialize_term(split_tree_to_stt(T, 1)) == serialize_term(atom(1, "a")));
}

TEST_CASE("a constrained pair compiles to a constraint over a combine") {
    Stcw w;
    w.labels = {"a", "b"};
    w.constraints = {{0, 1, Interval::closed(0, 0), Owner::zeta()}};
    const auto T = decompose_ta(w);
    CHECK(T.width() == 2);
    const auto t = split_tree_to_stt(T, 2);
    const Term leaf = add_constraint(1, 2, Interval::closed(0, 0), Owner::zeta(), combine(atom(1, "a"), atom(2, "b")));
    CHECK(structurally_equal(t, add_succ(1, 2, leaf)));
    CHECK_THROWS_AS(split_tree_to_stt(T, 1), Error);
}

TEST_CASE("two-clock reference run has split-width exactly 6") {
    const auto S = load_model("ta_two_clock_ref");
    const auto w = sem_stcw(S, {0, 1, 2});
    CHECK(w.size() == 21);
    CHECK(std::holds_alternative<RoundPartition>(check_well_timed(w, clock_set(S), 0, 1)));
    const auto T = decompose_ta(w);
    check_tree(T, w);
    CHECK(T.width() == 6);
    CHECK(T.width() == required_width(ModelKind::TA, 2));
    const auto t = split_tree_to_stt(T, 6);
    check_round_trip(t, w, 6, 4);
    CHECK(accepts(t, 6, 4));
    CHECK(SystemAutomaton(S, 6, 4).accepts(t));
    CHECK(split_tree_to_json(T)["nodes"].size() == T.nodes.size());
    CHECK(split_tree_to_dot(T).rfind("digraph", 0) == 0);
}

TEST_CASE("stack-free words decompose the same way under the pushdown strategy") {
    Rng rng(11);
    for (int it = 0; it < 50; ++it) {
        const auto rr = random_run(rng, ModelKind::TA, 2, 0, 1, 10, 4);
        const auto w = sem_stcw(rr.system, rr.run);
        CHECK(decompose_tpda(w).width() <= required_width(ModelKind::TA, 2));
    }
}

TEST_CASE("too many rounds is reported") {
    Rng rng(5);
    for (int it = 0; it < 40; ++it) {
        const auto rr = random_run(rng, ModelKind::DTMPDA, 0, 2, 3, 14, 3);
        const auto w = sem_stcw(rr.system, rr.run);
        if (round_partition(w).rounds <= 1) continue;
        CHECK_THROWS_AS(decompose_mpda(w, 2, 1), Error);
        return;
    }
    FAIL("no multi-round sample drawn");
}

TEST_CASE("random runs: width bounds, node rules and round trip") {
    const std::vector<ClassCase> cases = {
        {ModelKind::TA, 1, 0, 1},     {ModelKind::TA, 2, 0, 1},     {ModelKind::TA, 3, 0, 1},
        {ModelKind::TPDA, 0, 1, 1},   {ModelKind::TPDA, 1, 1, 1},   {ModelKind::TPDA, 2, 1, 1},
        {ModelKind::DTMPDA, 0, 2, 1}, {ModelKind::DTMPDA, 1, 2, 2}, {ModelKind::DTMPDA, 0, 3, 2},
    };
    Rng rng(2024);
    for (const auto& cc : cases) {
        CAPTURE(model_kind_name(cc.kind));
        CAPTURE(cc.clocks);
        CAPTURE(cc.stacks);
        CAPTURE(cc.rounds);
        const int K = required_width(cc.kind, cc.clocks, cc.stacks, cc.rounds);
        for (int it = 0; it < 200; ++it) {
            const auto rr = random_run(rng, cc.kind, cc.clocks, cc.stacks, cc.rounds, 16, 4);
            const auto w = sem_stcw(rr.system, rr.run);
            const auto T = decompose_for(rr.system, w);
            CHECK(T.width() <= K);
            check_tree(T, w);
            check_round_trip(split_tree_to_stt(T, K), w, K, 4);
        }
    }
}
