#include <doctest.h>

#include <fstream>
#include <sstream>

#include "tcwta/stt.hpp"
#include "tcwta/stt_io.hpp"

using namespace tcwta;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Term example_term() { return parse_term(slurp(std::string(TCWTA_TEST_DATA) + "/example_term.txt")); }

// The same word with colors following the position order.
Term monotone_example() {
    return parse_term("forget_2(succ_1_2(forget_3(succ_3_4(succ_2_3("
                      "add_1_3[2,inf]((1,a) + (3,c)) + add_2_4[1,3]((2,b) + (4,d)))))))");
}

} // namespace

TEST_CASE("eval of the four-letter example term") {
    auto g = eval(example_term());
    auto lin = linearize(g);
    CHECK(lin.word.word.labels == std::vector<std::string>{"a", "b", "c", "d"});
    CHECK(lin.word.word.sorted_constraints() ==
          std::vector<Constraint>{{0, 2, Interval::at_least(2), {}}, {1, 3, Interval{1, 3}, {}}});
    CHECK(lin.colored == std::map<int, int>{{1, 0}, {4, 3}});
}

TEST_CASE("eval basics") {
    auto g = eval(atom(1, "a"));
    CHECK(g.size() == 1);
    CHECK(g.chi == std::map<int, int>{{1, 0}});
    try {
        eval(combine(atom(1, "a"), atom(1, "b")));
        FAIL("expected ColorClash");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::ColorClash);
    }
    // Edges on dead colors are no-ops.
    auto dead = eval(add_succ(1, 5, atom(1, "a")));
    CHECK(dead.succ.empty());
    // Rename exchanges bindings.
    auto r = eval(rename(1, 2, combine(atom(1, "a"), atom(2, "b"))));
    CHECK(r.chi == std::map<int, int>{{1, 1}, {2, 0}});
}

TEST_CASE("is_monotonic") {
    // succ_3_2 links color 3 to the smaller color 2, so the literal example is not monotonic.
    CHECK_FALSE(is_monotonic(example_term()));
    CHECK(is_monotonic(monotone_example()));
    CHECK_FALSE(is_monotonic(add_succ(2, 1, combine(atom(1, "a"), atom(2, "b")))));
    CHECK_FALSE(is_monotonic(rename(1, 5, combine(atom(1, "a"), atom(3, "b")))));
    CHECK(is_monotonic(rename(1, 2, combine(atom(1, "a"), atom(3, "b")))));
    CHECK(is_monotonic(atomic_pair(3, "b", 4, "d", Interval{1, 3})));
}

TEST_CASE("is_km_stt") {
    CHECK(is_km_stt(example_term(), 2, 4));
    CHECK_FALSE(is_km_stt(example_term(), 1, 4));
    CHECK_FALSE(is_km_stt(example_term(), 2, 3)); // constant 3 needs M > 3
    auto bad = add_constraint(1, 3, Interval{0, 1}, {},
                              combine(add_succ(1, 2, combine(atom(1, "a"), atom(2, "b"))), atom(3, "c")));
    CHECK_FALSE(is_km_stt(bad, 2, 4));
}

TEST_CASE("term text round trip") {
    CHECK(serialize_term(atom(1, "a")) == "(1,a)");
    CHECK(serialize_term(atom(2, "")) == "(2,)");
    for (const auto& t : {example_term(), monotone_example(),
                          add_constraint(1, 2, Interval::zero(), Owner::zeta(), combine(atom(1, ""), atom(2, ""))),
                          add_constraint(1, 2, Interval{0, 3}, Owner::of_clock("x"), combine(atom(1, ""), atom(2, ""))),
                          add_constraint(1, 2, Interval{1, 1}, Owner::of_stack(2), combine(atom(1, "a"), atom(2, "b")))}) {
        CHECK(structurally_equal(parse_term(serialize_term(t)), t));
        CHECK(structurally_equal(term_from_json(term_to_json(t)), t));
    }
    CHECK(serialize_term(example_term()) ==
          "forget_3(succ_1_3(forget_2(succ_2_4(succ_3_2(add_1_2[2,inf]((1,a) + (2,c)) + "
          "rename_1_3(rename_2_4(add_1_2[1,3]((1,b) + (2,d)))))))))");
}

TEST_CASE("parse errors carry a location") {
    for (const char* bad : {"(1,", "forget_(1,a)", "(1,a) junk", "add_1_2[3,1]((1,a) + (2,b))", "frob_1((1,a))"}) {
        try {
            parse_term(bad);
            FAIL("expected SyntaxError for " << bad);
        } catch (const Error& e) {
            CHECK(e.code() == Errc::SyntaxError);
            CHECK(std::string(e.what()).find(':') != std::string::npos);
        }
    }
}
