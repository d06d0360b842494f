// Copyright (c) tcwta contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "tcwta/system.hpp"

namespace tcwta {

// ---------------------------------------------------------------- generic engine

// Bottom-up saturation of a tree automaton given as rule families, processed
// in discovery order so that the first accepting state has a derivation of
// minimal height. `binary` receives every unordered pair of processed states
// once, lower id first.
//
// States may be sorted into groups (for instance by everything except
// timing data). Pairs are then only formed between groups that `compatible`
// admits, and the answer is cached per group pair. Group tags prefilter that
// test: groups g, h are considered when a partner tag of one equals a tag of
// the other.
template <typename State, typename Label, typename Hash = std::hash<State>>
class TreeSearch {
  public:
    using Produced = std::vector<std::pair<State, Label>>;
    struct Rules {
        std::function<Produced()> leaves;
        std::function<Produced(const State&)> unary;
        std::function<Produced(const State&, const State&)> binary;
        std::function<bool(const State&)> accepting;
        std::function<int(const State&)> group;                    // default: one group
        std::function<bool(int, int)> compatible;                  // on group ids
        std::function<std::vector<int32_t>(const State&)> tags;
        std::function<std::vector<int32_t>(const State&)> partner_tags;
    };
    struct Link {
        int a = -1, b = -1; // parents; -1 for absent
        int layer = 0;
        Label label;
    };

    explicit TreeSearch(Rules rules, size_t max_states = 2'000'000)
        : rules_(std::move(rules)), max_states_(max_states) {}

    // Index of the first accepting state, or nullopt at the fixpoint.
    std::optional<int> run() {
        for (auto& [s, l] : rules_.leaves())
            if (auto hit = insert(std::move(s), -1, -1, 0, std::move(l))) return hit;
        while (!fifo_.empty()) {
            const int a = fifo_.front();
            fifo_.pop_front();
            for (auto& [s, l] : rules_.unary(*states_[a]))
                if (auto hit = insert(std::move(s), a, -1, links_[a].layer + 1, std::move(l))) return hit;
            const int g = enter_group(a);
            for (int h : partner_groups(g)) {
                for (int b : members_[h]) {
                    const int lo = std::min(a, b), hi = std::max(a, b);
                    const int lay = std::max(links_[lo].layer, links_[hi].layer) + 1;
                    for (auto& [s, l] : rules_.binary(*states_[lo], *states_[hi]))
                        if (auto hit = insert(std::move(s), lo, hi, lay, std::move(l))) return hit;
                }
            }
        }
        return std::nullopt;
    }

    [[nodiscard]] size_t size() const { return states_.size(); }
    [[nodiscard]] size_t groups() const { return members_.size(); }
    [[nodiscard]] const State& state(int id) const { return *states_[id]; }
    [[nodiscard]] const Link& link(int id) const { return links_[id]; }

  private:
    Rules rules_;
    size_t max_states_;
    std::vector<const State*> states_; // keys of index_, whose nodes never move
    std::vector<Link> links_;
    std::unordered_map<State, int, Hash> index_;
    std::deque<int> fifo_;

    std::unordered_map<int, int> group_slot_;  // rule group id -> slot
    std::vector<std::vector<int>> members_;    // processed states per slot
    std::vector<int> key_;                     // rule group id per slot
    std::vector<std::vector<int>> compatible_; // per slot: compatible slots seen so far
    std::unordered_map<int32_t, std::vector<int>> by_tag_, by_partner_;
    std::vector<int> seen_; // last slot that listed a slot as candidate

    // Adds processed state a to its group; a new group is tested against
    // every earlier one (and itself) once.
    int enter_group(int a) {
        const int key = rules_.group ? rules_.group(*states_[a]) : 0;
        auto [it, fresh] = group_slot_.try_emplace(key, static_cast<int>(members_.size()));
        const int g = it->second;
        if (!fresh) {
            members_[g].push_back(a);
            return g;
        }
        members_.push_back({a});
        key_.push_back(key);
        compatible_.emplace_back();
        std::vector<int> cand;
        if (rules_.tags) {
            const auto mine = rules_.tags(*states_[a]);
            const auto want = rules_.partner_tags(*states_[a]);
            for (int32_t k : mine) by_tag_[k].push_back(g);
            for (int32_t k : want) by_partner_[k].push_back(g);
            seen_.resize(members_.size(), -1);
            auto see = [&](const std::unordered_map<int32_t, std::vector<int>>& index, const std::vector<int32_t>& keys) {
                for (int32_t k : keys) {
                    auto f = index.find(k);
                    if (f == index.end()) continue;
                    for (int h : f->second)
                        if (seen_[h] != g) {
                            seen_[h] = g;
                            cand.push_back(h);
                        }
                }
            };
            see(by_tag_, want);
            see(by_partner_, mine);
        } else {
            for (int h = 0; h <= g; ++h) cand.push_back(h);
        }
        for (int h : cand) {
            if (rules_.compatible && !rules_.compatible(key_[h], key)) continue;
            compatible_[g].push_back(h);
            if (h != g) compatible_[h].push_back(g);
        }
        return g;
    }

    [[nodiscard]] const std::vector<int>& partner_groups(int g) const { return compatible_[g]; }

    std::optional<int> insert(State s, int a, int b, int layer, Label l) {
        const int id = static_cast<int>(states_.size());
        const auto [it, fresh] = index_.try_emplace(std::move(s), id);
        if (!fresh) return std::nullopt;
        if (states_.size() >= max_states_) {
            index_.erase(it);
            throw Error(Errc::ResourceLimit, "state space exceeds " + std::to_string(max_states_) + " states");
        }
        states_.push_back(&it->first);
        const bool acc = rules_.accepting(it->first);
        links_.push_back({a, b, layer, std::move(l)});
        fifo_.push_back(id);
        if (acc) return id;
        return std::nullopt;
    }
};

// ---------------------------------------------------------------- system emptiness

struct Witness {
    Term term;
    Run run;                          // transitions after the implicit first one
    std::vector<PointGuess> guesses;  // per word position
    Stcw stcw;
    TimestampMap timestamps;
    std::vector<TimedLetter> timed_word;
    int depth = 0;
};

struct Verdict {
    bool nonempty = false;
    int K = 0;
    int M = 0;
    size_t states_explored = 0;
    TimedSystem searched; // the round-tracking system for multistack models
    std::optional<Witness> witness;
};

struct EmptinessOptions {
    std::optional<int> K; // must not be below the required width
    std::optional<int> M; // must exceed every constant
    size_t max_states = 2'000'000;
};

// Throws Error{ModelError} for rejected overrides, Error{ResourceLimit},
// and Error{InternalInconsistency} when a witness fails re-validation.
Verdict check_emptiness(const TimedSystem& S, const EmptinessOptions& opt = {});

// Checks term, realization and run against the system; throws InternalInconsistency.
void revalidate(const TimedSystem& S, const Witness& w, int K, int M);

// Words equal up to the order of reset points inside each reset block.
bool same_up_to_reset_order(const Stcw& a, const Stcw& b);

std::string witness_to_run(const TimedSystem& S, const Witness& w);
json verdict_to_json(const TimedSystem& S, const Verdict& v);

} // namespace tcwta
