#include <doctest.h>

#include <chrono>
#include <filesystem>
#include <fstream>

#include "oracles.hpp"
#include "tcwta/emptiness.hpp"

using namespace tcwta;
namespace fs = std::filesystem;

namespace {

TimedSystem load_model(const std::string& name) {
    std::ifstream f(fs::path(TCWTA_MODELS_DIR) / (name + ".json"));
    REQUIRE(f.good());
    return system_from_json(json::parse(f));
}

std::vector<std::string> model_names() {
    std::vector<std::string> out;
    for (const auto& e : fs::directory_iterator(TCWTA_MODELS_DIR))
        if (e.path().extension() == ".json") out.push_back(e.path().stem().string());
    std::sort(out.begin(), out.end());
    return out;
}

// Initial reset time, then one time per action point.
std::vector<int64_t> action_times(const Witness& w) {
    std::vector<int64_t> out{w.timestamps.at(0)};
    for (size_t p = 0; p < w.guesses.size(); ++p)
        if (w.guesses[p].role == PointRole::Action) out.push_back(w.timestamps.at(p));
    return out;
}

using IntSearch = TreeSearch<int, std::string>;

} // namespace

TEST_CASE("tree search: saturation reaches the fixpoint and stops at the first accepting state") {
    IntSearch::Rules r;
    r.leaves = [] { return IntSearch::Produced{{1, "1"}}; };
    r.unary = [](const int& s) { return s < 20 ? IntSearch::Produced{{s * 2, "dbl"}} : IntSearch::Produced{}; };
    r.binary = [](const int& a, const int& b) {
        return a + b <= 20 ? IntSearch::Produced{{a + b, "add"}} : IntSearch::Produced{};
    };
    SUBCASE("unreachable target exhausts the space") {
        r.accepting = [](const int& s) { return s == 21; };
        IntSearch search(r);
        CHECK_FALSE(search.run());
        CHECK(search.size() == 29); // 1..20 and the doubles 22..38
    }
    SUBCASE("witness height is minimal") {
        r.accepting = [](const int& s) { return s == 8; };
        IntSearch search(r);
        const auto hit = search.run();
        REQUIRE(hit);
        CHECK(search.state(*hit) == 8);
        CHECK(search.link(*hit).layer == 3); // 1 -> 2 -> 4 -> 8
    }
    SUBCASE("state cap") {
        r.accepting = [](const int&) { return false; };
        IntSearch search(r, 5);
        CHECK_THROWS_AS(search.run(), Error);
    }
}

TEST_CASE("emptiness: every curated model agrees with bounded run enumeration") {
    const auto names = model_names();
    REQUIRE(names.size() >= 20);
    for (const auto& name : names) {
        CAPTURE(name);
        const auto S = load_model(name);
        const auto t0 = std::chrono::steady_clock::now();
        const auto v = check_emptiness(S);
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        CHECK(secs < 10.0);
        const auto brute = oracle::brute_force_run(S, 8, S.kind == ModelKind::DTMPDA);
        CHECK(v.nonempty == brute.has_value());
        if (!v.nonempty) {
            CHECK_FALSE(v.witness);
            continue;
        }
        REQUIRE(v.witness);
        const auto& w = *v.witness;
        CHECK_NOTHROW(revalidate(v.searched, w, v.K, v.M));
        CHECK(oracle::replay_run(v.searched, w.run, action_times(w), false));
    }
}

TEST_CASE("emptiness: named verdicts") {
    const std::vector<std::pair<std::string, bool>> expected = {
        {"ta_two_clock_ref", true},           {"ta_contradictory_guard", false}, {"tpda_push_pop_age", true},
        {"tpda_clock_vs_age", false}, {"mpda_cross_stacks", true},       {"mpda_needs_second_round", false},
        {"ta_initial_final", true},  {"ta_loop_needed", true},          {"ta_loop_empty", false},
    };
    for (const auto& [name, nonempty] : expected) {
        CAPTURE(name);
        CHECK(check_emptiness(load_model(name)).nonempty == nonempty);
    }
}

TEST_CASE("emptiness: the empty run is a witness when the initial state is final") {
    const auto v = check_emptiness(load_model("ta_initial_final"));
    REQUIRE(v.witness);
    CHECK(v.witness->run.empty());
}

TEST_CASE("emptiness: two-clock reference witness") {
    const auto S = load_model("ta_two_clock_ref");
    const auto v = check_emptiness(S);
    CHECK(v.K == 6);
    CHECK(v.M == 4);
    REQUIRE(v.witness);
    CHECK(v.witness->run == std::vector<int>{0, 1, 2});
    const auto j = verdict_to_json(S, v);
    CHECK(j["verdict"] == "nonempty");
    CHECK(j["witness"]["run"].size() == 4);
    CHECK(j["states_explored"].get<size_t>() == v.states_explored);
    CHECK_FALSE(witness_to_run(S, *v.witness).empty());
}

TEST_CASE("emptiness: overrides") {
    const auto S = load_model("ta_exact_delay");
    CHECK_THROWS_AS(check_emptiness(S, {.K = 4}), Error);
    CHECK_THROWS_AS(check_emptiness(S, {.M = 1}), Error);
    const auto v = check_emptiness(S, {.K = 6, .M = 3});
    CHECK(v.nonempty);
    CHECK(v.K == 6);
    EmptinessOptions tiny;
    tiny.max_states = 3;
    try {
        check_emptiness(load_model("ta_loop_empty"), tiny);
        FAIL("expected a resource limit");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::ResourceLimit);
    }
}

TEST_CASE("emptiness: empty verdict json") {
    const auto S = load_model("ta_contradictory_guard");
    const auto j = verdict_to_json(S, check_emptiness(S));
    CHECK(j["verdict"] == "empty");
    CHECK(j["witness"].is_null());
}

TEST_CASE("round normalization agrees with sweep-bounded enumeration") {
    for (const auto& name : model_names()) {
        const auto S = load_model(name);
        if (S.kind != ModelKind::DTMPDA) continue;
        CAPTURE(name);
        for (int k = 1; k <= 3; ++k) {
            auto Sk = S;
            Sk.rounds = k;
            const auto normalized = round_normalize(Sk, k);
            CHECK(oracle::brute_force_run(normalized, 8, false).has_value() ==
                  oracle::brute_force_run(Sk, 8, true).has_value());
        }
    }
}
