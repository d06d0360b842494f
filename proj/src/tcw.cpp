// Copyright (c) tcwta contributors.
// SPDX-License-Identifier: Apache-2.0
#include "tcwta/tcw.hpp"

#include <algorithm>
#include <map>

namespace tcwta {

const char* errc_name(Errc c) {
    switch (c) {
    case Errc::NotLinear: return "NotLinear";
    case Errc::BackwardConstraint: return "BackwardConstraint";
    case Errc::LabelMismatch: return "LabelMismatch";
    case Errc::ColorClash: return "ColorClash";
    case Errc::ColorOverlap: return "ColorOverlap";
    case Errc::SyntaxError: return "SyntaxError";
    case Errc::NotWellTimed: return "NotWellTimed";
    case Errc::TooManyRounds: return "TooManyRounds";
    case Errc::WidthExceeded: return "WidthExceeded";
    case Errc::IllFormedRun: return "IllFormedRun";
    case Errc::ModelError: return "ModelError";
    case Errc::InternalInconsistency: return "InternalInconsistency";
    case Errc::ResourceLimit: return "ResourceLimit";
    }
    return "Error";
}

std::string Interval::str() const {
    return "[" + std::to_string(lo) + "," + (bounded() ? std::to_string(up) : std::string("inf")) + "]";
}

std::string Owner::str() const {
    switch (kind) {
    case Kind::Untagged: return "untagged";
    case Kind::Clock: return "clock:" + clock;
    case Kind::Zeta: return "zeta";
    case Kind::Stack: return "stack:" + std::to_string(stack);
    }
    return "untagged";
}

std::vector<Constraint> Stcw::sorted_constraints() const {
    auto c = constraints;
    std::sort(c.begin(), c.end());
    return c;
}

SplitStcw SplitStcw::whole(Stcw w) {
    SplitStcw s;
    const int n = w.size();
    s.hole.assign(n > 0 ? n - 1 : 0, false);
    s.origin.resize(n);
    for (int i = 0; i < n; ++i) s.origin[i] = i;
    s.word = std::move(w);
    return s;
}

int SplitStcw::width() const {
    if (size() == 0) return 0;
    return 1 + static_cast<int>(std::count(hole.begin(), hole.end(), true));
}

std::vector<Block> blocks(const SplitStcw& w) {
    std::vector<Block> out;
    const int n = w.size();
    int start = 0;
    for (int i = 0; i < n; ++i) {
        if (i + 1 == n || w.hole[i]) {
            out.push_back({start, i});
            start = i + 1;
        }
    }
    return out;
}

std::set<int> endpoints(const SplitStcw& w) {
    std::set<int> ep;
    for (const auto& b : blocks(w)) {
        ep.insert(b.first);
        ep.insert(b.last);
    }
    return ep;
}

bool is_atomic(const SplitStcw& w) {
    if (w.size() == 1) return w.word.constraints.empty();
    if (w.size() != 2 || !w.hole[0] || w.word.constraints.size() != 1) return false;
    const auto& c = w.word.constraints[0];
    return c.src == 0 && c.tgt == 1;
}

SplitStcw validate_tcw(const RawGraph& g) {
    const int n = static_cast<int>(g.positions.size());
    if (n == 0) throw Error(Errc::NotLinear, "no positions");
    std::map<int, int> index;
    for (int i = 0; i < n; ++i) {
        if (!index.emplace(g.positions[i].id, i).second)
            throw Error(Errc::NotLinear, "duplicate position id " + std::to_string(g.positions[i].id));
    }
    auto lookup = [&](int id, const char* what) {
        auto it = index.find(id);
        if (it == index.end()) throw Error(Errc::NotLinear, std::string("unknown position in ") + what + ": " + std::to_string(id));
        return it->second;
    };
    std::vector<int> next(n, -1), prev(n, -1);
    std::vector<char> is_hole(n, 0);
    auto add_edge = [&](std::pair<int, int> e, bool hole) {
        const int u = lookup(e.first, hole ? "holes" : "succ");
        const int v = lookup(e.second, hole ? "holes" : "succ");
        if (next[u] != -1) throw Error(Errc::NotLinear, "position " + std::to_string(e.first) + " has two successors");
        if (prev[v] != -1) throw Error(Errc::NotLinear, "position " + std::to_string(e.second) + " has two predecessors");
        next[u] = v;
        prev[v] = u;
        is_hole[u] = hole ? 1 : 0;
    };
    for (const auto& e : g.succ) add_edge(e, false);
    for (const auto& e : g.holes) add_edge(e, true);

    int start = -1;
    for (int i = 0; i < n; ++i) {
        if (prev[i] == -1) {
            if (start != -1) throw Error(Errc::NotLinear, "successor relation is disconnected");
            start = i;
        }
    }
    if (start == -1) throw Error(Errc::NotLinear, "successor relation is cyclic");
    std::vector<int> order;
    order.reserve(n);
    std::vector<int> rank(n, -1);
    for (int v = start; v != -1; v = next[v]) {
        if (rank[v] != -1) throw Error(Errc::NotLinear, "successor relation is cyclic");
        rank[v] = static_cast<int>(order.size());
        order.push_back(v);
    }
    if (static_cast<int>(order.size()) != n) throw Error(Errc::NotLinear, "successor relation does not cover all positions");

    SplitStcw out;
    out.word.labels.resize(n);
    out.origin.resize(n);
    out.hole.assign(n - 1, false);
    for (int r = 0; r < n; ++r) {
        const int v = order[r];
        out.word.labels[r] = g.positions[v].label;
        out.origin[r] = g.positions[v].id;
        if (r + 1 < n) out.hole[r] = is_hole[v] != 0;
    }
    for (const auto& c : g.constraints) {
        const int u = rank[lookup(c.src, "constraints")];
        const int v = rank[lookup(c.tgt, "constraints")];
        if (v <= u)
            throw Error(Errc::BackwardConstraint,
                        "constraint " + std::to_string(c.src) + " -> " + std::to_string(c.tgt) + " does not point forward");
        if (!c.iv.well_formed()) throw Error(Errc::NotLinear, "malformed interval " + c.iv.str());
        out.word.constraints.push_back({u, v, c.iv, c.owner});
    }
    return out;
}

RawGraph to_raw(const SplitStcw& w) {
    RawGraph g;
    const int n = w.size();
    for (int i = 0; i < n; ++i) g.positions.push_back({i, w.word.labels[i]});
    for (int i = 0; i + 1 < n; ++i) (w.hole[i] ? g.holes : g.succ).emplace_back(i, i + 1);
    g.constraints = w.word.sorted_constraints();
    return g;
}

bool is_simple(const Stcw& w) {
    std::vector<int> degree(w.size(), 0);
    for (const auto& c : w.constraints) {
        if (++degree[c.src] > 1 || ++degree[c.tgt] > 1) return false;
    }
    return true;
}

} // namespace tcwta
