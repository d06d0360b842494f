// Copyright (c) tcwta contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "tcwta/error.hpp"
#include "tcwta/interval.hpp"

namespace tcwta {

// Which clock or stack a constraint edge belongs to.
struct Owner {
    enum class Kind { Untagged, Clock, Zeta, Stack };
    Kind kind = Kind::Untagged;
    std::string clock; // Kind::Clock only
    int stack = 0;     // Kind::Stack only, 1-based

    static Owner untagged() { return {}; }
    static Owner of_clock(std::string name) { return {Kind::Clock, std::move(name), 0}; }
    static Owner zeta() { return {Kind::Zeta, {}, 0}; }
    static Owner of_stack(int s) { return {Kind::Stack, {}, s}; }

    [[nodiscard]] bool is_clock_like() const { return kind == Kind::Clock || kind == Kind::Zeta; }
    [[nodiscard]] std::string str() const;

    friend bool operator==(const Owner&, const Owner&) = default;
    friend auto operator<=>(const Owner&, const Owner&) = default;
};

struct Constraint {
    int src = 0;
    int tgt = 0;
    Interval iv;
    Owner owner;

    friend bool operator==(const Constraint&, const Constraint&) = default;
    friend auto operator<=>(const Constraint&, const Constraint&) = default;
};

// A word with timing constraints. Positions are 0..size()-1 and the
// successor relation is i -> i+1.
struct Stcw {
    std::vector<std::string> labels; // "" is the silent letter
    std::vector<Constraint> constraints;

    [[nodiscard]] int size() const { return static_cast<int>(labels.size()); }
    // Constraints sorted by (src, tgt, interval, owner); used for comparisons.
    [[nodiscard]] std::vector<Constraint> sorted_constraints() const;

    friend bool operator==(const Stcw& a, const Stcw& b) {
        return a.labels == b.labels && a.sorted_constraints() == b.sorted_constraints();
    }
};

// A word with some successor edges absent. hole[i] refers to the pair (i, i+1).
struct SplitStcw {
    Stcw word;
    std::vector<bool> hole;  // size() == max(0, word.size()-1)
    std::vector<int> origin; // position in the enclosing root word

    static SplitStcw whole(Stcw w);

    [[nodiscard]] int size() const { return word.size(); }
    [[nodiscard]] int width() const;
};

struct Block {
    int first = 0;
    int last = 0;
    friend bool operator==(const Block&, const Block&) = default;
};

std::vector<Block> blocks(const SplitStcw& w);
std::set<int> endpoints(const SplitStcw& w);
// A single point, or two points with a hole between them joined by a constraint.
bool is_atomic(const SplitStcw& w);

// Unvalidated graph as read from a file.
struct RawGraph {
    struct Position {
        int id = 0;
        std::string label;
    };
    std::vector<Position> positions;
    std::vector<std::pair<int, int>> succ;
    std::vector<std::pair<int, int>> holes;
    std::vector<Constraint> constraints; // endpoints are raw ids
};

// Orders positions along succ ∪ holes and renumbers them densely.
// Throws Error{NotLinear} or Error{BackwardConstraint}.
SplitStcw validate_tcw(const RawGraph& g);
RawGraph to_raw(const SplitStcw& w);

bool is_simple(const Stcw& w);

// ---------------------------------------------------------------- realizability

using TimestampMap = std::vector<int64_t>;

// Edge of the difference-constraint graph: t[to] - t[from] <= weight.
struct DiffEdge {
    enum class Kind { Order, Lower, Upper };
    int from = 0;
    int to = 0;
    int64_t weight = 0;
    Kind kind = Kind::Order;
    int constraint = -1; // index into constraints for Lower/Upper
};

struct Unrealizable {
    std::vector<DiffEdge> cycle; // a negative cycle, edges in traversal order
};

using Realization = std::variant<TimestampMap, Unrealizable>;

Realization realize(const Stcw& w);
inline Realization realize(const SplitStcw& w) { return realize(w.word); }
// True iff ts is non-decreasing and satisfies every constraint.
bool satisfies(const Stcw& w, const TimestampMap& ts);

struct TimedLetter {
    std::string letter;
    double time = 0;
};

// Throws Error{LabelMismatch} when the non-silent labels differ from the word.
bool check_realization(const Stcw& w, const std::vector<TimedLetter>& word);
std::vector<TimedLetter> timed_word(const Stcw& w, const TimestampMap& ts);

// ---------------------------------------------------------------- well-timedness

struct Segment {
    int round = 1;
    int stack = 1;
    int first = 0;
    int last = 0;
    friend bool operator==(const Segment&, const Segment&) = default;
};

struct RoundPartition {
    int rounds = 1;
    std::vector<Segment> segments;
};

struct WellTimedViolation {
    enum class Kind { StackCrossing, ClockMatchViolation, TooManyRounds, UntaggedEdge, UnknownOwner };
    Kind kind = Kind::StackCrossing;
    int stack = 0;
    std::string clock;
    std::string detail;
};

const char* violation_name(WellTimedViolation::Kind k);

std::variant<RoundPartition, WellTimedViolation> check_well_timed(const Stcw& w, const std::set<std::string>& clocks,
                                                                  int stacks, int rounds);
// Greedy round/context partition over stack-edge endpoints.
RoundPartition round_partition(const Stcw& w);

} // namespace tcwta
