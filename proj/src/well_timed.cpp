// Copyright (c) tcwta contributors.
// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <map>

#include "tcwta/tcw.hpp"

namespace tcwta {

const char* violation_name(WellTimedViolation::Kind k) {
    switch (k) {
    case WellTimedViolation::Kind::StackCrossing: return "StackCrossing";
    case WellTimedViolation::Kind::ClockMatchViolation: return "ClockMatchViolation";
    case WellTimedViolation::Kind::TooManyRounds: return "TooManyRounds";
    case WellTimedViolation::Kind::UntaggedEdge: return "UntaggedEdge";
    case WellTimedViolation::Kind::UnknownOwner: return "UnknownOwner";
    }
    return "Violation";
}

RoundPartition round_partition(const Stcw& w) {
    std::vector<int> stack_at(w.size(), 0);
    for (const auto& c : w.constraints) {
        if (c.owner.kind == Owner::Kind::Stack) stack_at[c.src] = stack_at[c.tgt] = c.owner.stack;
    }
    RoundPartition p;
    int round = 1, ctx = 1, first = 0;
    for (int i = 0; i < w.size(); ++i) {
        const int s = stack_at[i];
        if (s == 0 || s == ctx) continue;
        const int next_round = s > ctx ? round : round + 1;
        if (i > first) p.segments.push_back({round, ctx, first, i - 1});
        round = next_round;
        ctx = s;
        first = i;
    }
    if (w.size() > 0) p.segments.push_back({round, ctx, first, w.size() - 1});
    p.rounds = round;
    return p;
}

namespace {

bool crosses(const Constraint& a, const Constraint& b) {
    return (a.src < b.src && b.src < a.tgt && a.tgt < b.tgt) || (b.src < a.src && a.src < b.tgt && b.tgt < a.tgt);
}

} // namespace

std::variant<RoundPartition, WellTimedViolation> check_well_timed(const Stcw& w, const std::set<std::string>& clocks,
                                                                  int stacks, int rounds) {
    using V = WellTimedViolation;
    std::map<int, std::vector<Constraint>> per_stack;
    std::map<std::string, std::vector<Constraint>> per_clock; // "" keys the auxiliary clock
    for (const auto& c : w.constraints) {
        switch (c.owner.kind) {
        case Owner::Kind::Untagged:
            return V{V::Kind::UntaggedEdge, 0, {}, "constraint " + std::to_string(c.src) + "->" + std::to_string(c.tgt)};
        case Owner::Kind::Stack:
            if (c.owner.stack < 1 || c.owner.stack > stacks)
                return V{V::Kind::UnknownOwner, c.owner.stack, {}, "stack index out of range"};
            per_stack[c.owner.stack].push_back(c);
            break;
        case Owner::Kind::Clock:
            if (!clocks.count(c.owner.clock)) return V{V::Kind::UnknownOwner, 0, c.owner.clock, "undeclared clock"};
            per_clock[c.owner.clock].push_back(c);
            break;
        case Owner::Kind::Zeta: per_clock[""].push_back(c); break;
        }
    }
    for (auto& [s, edges] : per_stack) {
        for (size_t a = 0; a < edges.size(); ++a)
            for (size_t b = a + 1; b < edges.size(); ++b)
                if (crosses(edges[a], edges[b]))
                    return V{V::Kind::StackCrossing, s, {},
                             "edges " + std::to_string(edges[a].src) + "->" + std::to_string(edges[a].tgt) + " and " +
                                 std::to_string(edges[b].src) + "->" + std::to_string(edges[b].tgt)};
    }
    for (auto& [x, edges] : per_clock) {
        const std::string name = x.empty() ? "zeta" : x;
        std::sort(edges.begin(), edges.end());
        // Reset blocks: maximal runs of adjacent source positions.
        std::vector<int> block(edges.size());
        for (size_t e = 0; e < edges.size(); ++e)
            block[e] = (e > 0 && edges[e].src == edges[e - 1].src + 1) ? block[e - 1] : static_cast<int>(e);
        for (size_t a = 0; a < edges.size(); ++a) {
            for (size_t b = a + 1; b < edges.size(); ++b) {
                const auto& e1 = edges[a];
                const auto& e2 = edges[b];
                const bool ok = block[a] == block[b] ? (e2.src < e2.tgt && e2.tgt < e1.tgt) : (e1.tgt < e2.src);
                if (!ok)
                    return V{V::Kind::ClockMatchViolation, 0, name,
                             "edges " + std::to_string(e1.src) + "->" + std::to_string(e1.tgt) + " and " +
                                 std::to_string(e2.src) + "->" + std::to_string(e2.tgt)};
            }
        }
    }
    auto part = round_partition(w);
    if (stacks <= 1) {
        part.rounds = 1;
        part.segments = {{1, 1, 0, std::max(0, w.size() - 1)}};
    } else if (part.rounds > rounds) {
        return V{V::Kind::TooManyRounds, 0, {},
                 std::to_string(part.rounds) + " rounds needed, " + std::to_string(rounds) + " allowed"};
    }
    return part;
}

} // namespace tcwta
