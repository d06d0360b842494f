// Copyright (c) tcwta contributors.
// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>

#include "tcwta/tcw.hpp"

namespace tcwta {

namespace {

std::vector<DiffEdge> difference_edges(const Stcw& w) {
    std::vector<DiffEdge> edges;
    const int n = w.size();
    for (int i = 0; i + 1 < n; ++i) edges.push_back({i + 1, i, 0, DiffEdge::Kind::Order, -1});
    for (int k = 0; k < static_cast<int>(w.constraints.size()); ++k) {
        const auto& c = w.constraints[k];
        edges.push_back({c.tgt, c.src, -c.iv.lo, DiffEdge::Kind::Lower, k});
        if (c.iv.bounded()) edges.push_back({c.src, c.tgt, c.iv.up, DiffEdge::Kind::Upper, k});
    }
    return edges;
}

} // namespace

Realization realize(const Stcw& w) {
    const int n = w.size();
    if (n == 0) return TimestampMap{};
    const auto edges = difference_edges(w);
    // All-zero start is equivalent to a virtual source with 0-weight edges to every node.
    std::vector<int64_t> dist(n, 0);
    std::vector<int> pred(n, -1);
    int relaxed = -1;
    for (int round = 0; round <= n; ++round) {
        relaxed = -1;
        for (int e = 0; e < static_cast<int>(edges.size()); ++e) {
            const auto& ed = edges[e];
            if (dist[ed.from] + ed.weight < dist[ed.to]) {
                dist[ed.to] = dist[ed.from] + ed.weight;
                pred[ed.to] = e;
                relaxed = ed.to;
            }
        }
        if (relaxed == -1) break;
    }
    if (relaxed == -1) {
        TimestampMap ts(n);
        for (int i = 0; i < n; ++i) ts[i] = dist[i] - dist[0];
        return ts;
    }
    // Walk back n steps to land on the cycle, then collect it.
    int v = relaxed;
    for (int i = 0; i < n; ++i) v = edges[pred[v]].from;
    std::vector<DiffEdge> cycle;
    int u = v;
    do {
        cycle.push_back(edges[pred[u]]);
        u = edges[pred[u]].from;
    } while (u != v);
    std::reverse(cycle.begin(), cycle.end());
    return Unrealizable{std::move(cycle)};
}

bool satisfies(const Stcw& w, const TimestampMap& ts) {
    if (static_cast<int>(ts.size()) != w.size()) return false;
    for (int i = 0; i < w.size(); ++i) {
        if (ts[i] < 0) return false;
        if (i + 1 < w.size() && ts[i + 1] < ts[i]) return false;
    }
    for (const auto& c : w.constraints) {
        if (!c.iv.contains(ts[c.tgt] - ts[c.src])) return false;
    }
    return true;
}

std::vector<TimedLetter> timed_word(const Stcw& w, const TimestampMap& ts) {
    std::vector<TimedLetter> out;
    for (int i = 0; i < w.size(); ++i) {
        if (!w.labels[i].empty()) out.push_back({w.labels[i], static_cast<double>(ts[i])});
    }
    return out;
}

bool check_realization(const Stcw& w, const std::vector<TimedLetter>& word) {
    const int n = w.size();
    std::vector<int> visible;
    for (int i = 0; i < n; ++i) {
        if (!w.labels[i].empty()) visible.push_back(i);
    }
    if (visible.size() != word.size()) throw Error(Errc::LabelMismatch, "word length differs from the visible positions");
    for (size_t k = 0; k < visible.size(); ++k) {
        if (w.labels[visible[k]] != word[k].letter)
            throw Error(Errc::LabelMismatch, "letter " + std::to_string(k) + " is '" + word[k].letter + "', position has '" +
                                                 w.labels[visible[k]] + "'");
    }
    struct Edge {
        int from, to;
        double weight;
    };
    // Node n is the time origin.
    std::vector<Edge> edges;
    for (const auto& e : difference_edges(w)) edges.push_back({e.from, e.to, static_cast<double>(e.weight)});
    for (int i = 0; i < n; ++i) edges.push_back({i, n, 0.0}); // t_i >= 0
    for (size_t k = 0; k < visible.size(); ++k) {
        const int i = visible[k];
        edges.push_back({n, i, word[k].time});
        edges.push_back({i, n, -word[k].time});
    }
    constexpr double kEps = 1e-9;
    std::vector<double> dist(n + 1, 0.0);
    for (int round = 0; round <= n + 1; ++round) {
        bool changed = false;
        for (const auto& e : edges) {
            if (dist[e.from] + e.weight < dist[e.to] - kEps) {
                dist[e.to] = dist[e.from] + e.weight;
                changed = true;
            }
        }
        if (!changed) return true;
    }
    return false;
}

} // namespace tcwta
