// Copyright (c) tcwta contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "tcwta/split.hpp"
#include "tcwta/validity.hpp"

namespace tcwta {

struct Guard {
    std::string clock;
    Interval iv;
    friend bool operator==(const Guard&, const Guard&) = default;
};

struct StackOp {
    enum class Kind { Nop, Push, Pop };
    Kind kind = Kind::Nop;
    int stack = 0; // 1-based
    std::string sym;
    Interval iv; // Pop only: admissible age
    friend bool operator==(const StackOp&, const StackOp&) = default;
};

struct Transition {
    int from = 0;
    int to = 0;
    std::string letter; // "" is silent
    std::vector<Guard> guard;
    StackOp op;
    std::vector<std::string> resets;
    friend bool operator==(const Transition&, const Transition&) = default;
};

struct TimedSystem {
    ModelKind kind = ModelKind::TA;
    std::vector<std::string> states;
    int initial = 0;
    std::vector<int> final;
    std::vector<std::string> clocks;
    int stacks = 0;
    int rounds = 1;
    std::vector<std::string> alphabet;
    std::vector<std::string> stack_alphabet;
    std::vector<Transition> transitions;

    [[nodiscard]] bool is_final(int s) const;
    [[nodiscard]] int clock_index(const std::string& x) const; // -1 if undeclared
    [[nodiscard]] int64_t max_constant() const;
    [[nodiscard]] int64_t bound_M() const { return max_constant() + 1; }
};

// Throws Error{ModelError} on format or consistency problems.
TimedSystem system_from_json(const json& j);
json system_to_json(const TimedSystem& S);

// Index of the implicit first transition resetting every clock.
inline int dummy_transition(const TimedSystem& S) { return static_cast<int>(S.transitions.size()); }
Transition transition_at(const TimedSystem& S, int t); // t may be the dummy
int transition_count_with_dummy(const TimedSystem& S);

// ---------------------------------------------------------------- micro stages

// A system state, or a stage inside one transition's blow-up:
// stage 0 after the entry reset, stage t after guard conjunct t, then one
// stage per reset clock (at least one) where that clock's reset loop sits.
struct MicroState {
    int trans = -1; // -1: system state
    int stage = 0;  // system state index when trans == -1; the state count names the dummy source
    friend bool operator==(const MicroState&, const MicroState&) = default;
};

enum class PointRole { Entry, Guard, Action, Reset, Exit };

struct MicroPoint {
    PointRole role = PointRole::Entry;
    int index = 0; // Guard: conjunct (1-based); Reset: position of the clock in the reset list
    MicroState src, tgt;
    std::string label;
};

// Points of one transition with `checks[k]` reset loops for its k-th reset clock.
std::vector<MicroPoint> micro_decompose(const TimedSystem& S, int trans, const std::vector<int>& checks);

class MicroTable {
  public:
    explicit MicroTable(const TimedSystem& S);

    [[nodiscard]] int16_t state(int s) const { return static_cast<int16_t>(s); }
    [[nodiscard]] int16_t dummy_source() const { return static_cast<int16_t>(nstates_); }
    [[nodiscard]] int16_t stage(int trans, int stage) const { return static_cast<int16_t>(base_[trans] + stage); }
    [[nodiscard]] int16_t post(int trans, int k) const;
    [[nodiscard]] int16_t last_post(int trans) const;
    [[nodiscard]] int16_t encode(const MicroState& m) const;
    [[nodiscard]] MicroState decode(int16_t id) const;
    // Equal, or both post stages of one transition with a not after b.
    [[nodiscard]] bool eps_path(int16_t a, int16_t b) const;
    [[nodiscard]] std::string name(int16_t id) const;
    [[nodiscard]] int size() const { return total_; }

  private:
    const TimedSystem* S_;
    int nstates_ = 0;
    int total_ = 0;
    std::vector<int> base_, guards_, posts_;
};

// ---------------------------------------------------------------- run semantics

// Transition indices of an accepting run, the implicit first one excluded.
using Run = std::vector<int>;

// Throws Error{IllFormedRun}.
Stcw sem_stcw(const TimedSystem& S, const Run& run);

// Same word plus, per position, the run step (0 = implicit first) and role.
struct AnnotatedStcw {
    Stcw word;
    std::vector<int> step;
    std::vector<PointRole> role;
};
AnnotatedStcw sem_annotated(const TimedSystem& S, const Run& run);

// States S x {1..k} x {1..n} tracking round and context.
TimedSystem round_normalize(const TimedSystem& S, int rounds);

// ---------------------------------------------------------------- product automaton

using ClockSet = uint32_t; // bit per declared clock

struct ClockPair {
    uint8_t i = 0, j = 0;
    ClockSet clocks = 0;
    friend bool operator==(const ClockPair&, const ClockPair&) = default;
    friend auto operator<=>(const ClockPair&, const ClockPair&) = default;
};

struct StackPair {
    uint8_t stack = 0, i = 0, j = 0;
    friend bool operator==(const StackPair&, const StackPair&) = default;
    friend auto operator<=>(const StackPair&, const StackPair&) = default;
};

// Validity state plus guessed micro stages and the bookkeeping for reset
// blocks (clr, rgc) and push-pop nesting (pp). Entries outside q.P are kept
// at their defaults so that comparison is exact.
struct SystemState {
    ValidityState q;
    std::array<int16_t, kMaxColor + 1> src{};
    std::array<int16_t, kMaxColor + 1> tgt{};
    std::array<ClockSet, kMaxColor + 1> clr{}; // left endpoints only
    std::vector<ClockPair> rgc;                // sorted, nonzero masks
    std::vector<StackPair> pp;                 // sorted
    // Left endpoints of blocks that were linked across an exit point and so
    // cover more than one transition occurrence. Never read by the automaton.
    ColorSet spans = 0;

    [[nodiscard]] std::string str() const;
    friend bool operator==(const SystemState&, const SystemState&) = default;
    friend auto operator<=>(const SystemState&, const SystemState&) = default;
};

struct SystemStateHash {
    size_t operator()(const SystemState& s) const;
};

// Which transition and role a leaf point was guessed to be.
struct PointGuess {
    int trans = 0;
    PointRole role = PointRole::Action;
    friend bool operator==(const PointGuess&, const PointGuess&) = default;
};

template <typename T>
struct Guessed {
    T state;
    std::vector<PointGuess> points; // one per leaf point, left to right
};

class SystemAutomaton {
  public:
    SystemAutomaton(const TimedSystem& S, int K, int M);

    [[nodiscard]] const TimedSystem& system() const { return S_; }
    [[nodiscard]] const MicroTable& micro() const { return mt_; }
    [[nodiscard]] int K() const { return K_; }
    [[nodiscard]] int M() const { return M_; }

    // tsm is normalized; combine tries every shift of its right argument.
    [[nodiscard]] std::vector<Guessed<SystemState>> atom(int i, const std::string& a) const;
    [[nodiscard]] std::vector<Guessed<SystemState>> constraint(int i, int j, const Interval& iv, const Owner& owner,
                                                               const std::string& a, const std::string& b) const;
    [[nodiscard]] std::optional<SystemState> add_succ(const SystemState& s, int i, int j) const;
    [[nodiscard]] std::optional<SystemState> forget(const SystemState& s, int i) const;
    [[nodiscard]] std::optional<SystemState> rename(const SystemState& s, int i, int j) const;
    [[nodiscard]] std::vector<SystemState> combine(const SystemState& s1, const SystemState& s2) const;
    [[nodiscard]] bool accepting(const SystemState& s) const;

    // Bottom-up run over a term with the block cap and atomic-pair rule.
    [[nodiscard]] std::vector<SystemState> reachable(const Term& t) const;
    [[nodiscard]] bool accepts(const Term& t) const;

  private:
    const TimedSystem& S_;
    MicroTable mt_;
    int K_, M_;
    ClockSet all_clocks_ = 0;

    [[nodiscard]] ClockSet reset_mask(const Transition& d) const;
    [[nodiscard]] SystemState clean(SystemState s) const;
};

} // namespace tcwta
