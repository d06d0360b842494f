// Copyright (c) tcwta contributors.
// SPDX-License-Identifier: Apache-2.0
#include "tcwta/split.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <set>

namespace tcwta {

const char* model_kind_name(ModelKind k) {
    switch (k) {
    case ModelKind::TA: return "ta";
    case ModelKind::TPDA: return "tpda";
    case ModelKind::DTMPDA: return "dtmpda";
    }
    return "ta";
}

ModelKind model_kind_from_name(const std::string& s) {
    if (s == "ta") return ModelKind::TA;
    if (s == "tpda") return ModelKind::TPDA;
    if (s == "dtmpda") return ModelKind::DTMPDA;
    throw Error(Errc::ModelError, "unknown model kind '" + s + "'");
}

int SplitTree::width() const {
    int w = 0;
    for (const auto& n : nodes) w = std::max(w, n.label.width());
    return w;
}

int required_width(ModelKind kind, int clocks, int stacks, int rounds) {
    switch (kind) {
    case ModelKind::TA: return clocks + 4;
    case ModelKind::TPDA: return 4 * clocks + 6;
    case ModelKind::DTMPDA: {
        if (stacks <= 1) return 4 * clocks + 6;
        const int y = clocks + 1, kn = rounds * stacks;
        return std::max(kn + 2 * (kn - 1) * y, (rounds + 2) * (2 * y + 1));
    }
    }
    return clocks + 4;
}

int alternative_mpda_width(int clocks, int stacks, int rounds) { return (4 * stacks * rounds + 4) * (clocks + 2); }

namespace {

// Key grouping clock-like edges: "" for the auxiliary clock.
std::string clock_key(const Owner& o) { return o.kind == Owner::Kind::Zeta ? std::string() : "x:" + o.clock; }

class Decomposer {
  public:
    explicit Decomposer(const Stcw& w) : w_(w), into_(w.size(), -1) {
        for (size_t c = 0; c < w.constraints.size(); ++c) into_[w.constraints[c].tgt] = static_cast<int>(c);
    }

    SplitTree run(std::deque<int> initial) {
        std::vector<int> all(w_.size());
        std::iota(all.begin(), all.end(), 0);
        if (all.empty()) throw Error(Errc::NotWellTimed, "empty word has no split-tree");
        tree_.root = build(all, std::move(initial));
        return std::move(tree_);
    }

    // Cuts separating every context segment, plus detachment of reset
    // ranges whose checks lie in a later segment.
    std::deque<int> segment_cuts(const RoundPartition& part) const {
        std::set<int> cuts;
        for (size_t s = 0; s + 1 < part.segments.size(); ++s) cuts.insert(part.segments[s].last);
        for (size_t s = 1; s < part.segments.size(); ++s) {
            const auto& sg = part.segments[s];
            std::map<std::string, std::pair<int, int>> range;
            for (const auto& c : w_.constraints) {
                if (!c.owner.is_clock_like() || c.tgt < sg.first || c.tgt > sg.last || c.src >= sg.first) continue;
                auto [it, fresh] = range.try_emplace(clock_key(c.owner), c.src, c.src);
                if (!fresh) {
                    it->second.first = std::min(it->second.first, c.src);
                    it->second.second = std::max(it->second.second, c.src);
                }
            }
            for (const auto& [_, r] : range) {
                if (r.first > 0) cuts.insert(r.first - 1);
                cuts.insert(r.second);
            }
        }
        std::erase_if(cuts, [&](int p) { return p + 1 >= w_.size(); });
        return {cuts.begin(), cuts.end()};
    }

  private:
    const Stcw& w_;
    std::vector<int> into_; // position -> index of the constraint ending there
    std::set<int> cut_;
    SplitTree tree_;

    static bool member(const std::vector<int>& S, int p) { return std::binary_search(S.begin(), S.end(), p); }

    bool solid(const std::vector<int>& S, int p) const {
        return p >= 0 && !cut_.count(p) && member(S, p) && member(S, p + 1);
    }

    SplitStcw label(const std::vector<int>& S) const {
        SplitStcw out;
        std::map<int, int> local;
        for (int p : S) {
            local[p] = out.word.size();
            out.word.labels.push_back(w_.labels[p]);
        }
        for (const auto& c : w_.constraints) {
            if (local.count(c.src) && local.count(c.tgt)) out.word.constraints.push_back({local[c.src], local[c.tgt], c.iv, c.owner});
        }
        for (size_t k = 0; k + 1 < S.size(); ++k) out.hole.push_back(!(S[k + 1] == S[k] + 1 && !cut_.count(S[k])));
        out.origin = S;
        return out;
    }

    std::vector<std::vector<int>> components(const std::vector<int>& S) const {
        std::map<int, int> parent;
        for (int p : S) parent[p] = p;
        auto find = [&](int p) {
            while (parent[p] != p) p = parent[p] = parent[parent[p]];
            return p;
        };
        auto unite = [&](int a, int b) { parent[find(a)] = find(b); };
        for (int p : S)
            if (solid(S, p)) unite(p, p + 1);
        for (const auto& c : w_.constraints)
            if (member(S, c.src) && member(S, c.tgt)) unite(c.src, c.tgt);
        std::map<int, std::vector<int>> groups;
        for (int p : S) groups[find(p)].push_back(p);
        std::vector<std::vector<int>> out;
        for (auto& [_, g] : groups) out.push_back(std::move(g));
        std::sort(out.begin(), out.end());
        return out;
    }

    int add(SplitNode n) {
        tree_.nodes.push_back(std::move(n));
        return static_cast<int>(tree_.nodes.size()) - 1;
    }

    // One move of the strategy on a connected component, acting on its rightmost point.
    std::deque<int> plan(const std::vector<int>& S) const {
        const int j = S.back();
        std::vector<int> cuts;
        const int ci = into_[j];
        if (ci < 0 || !member(S, w_.constraints[ci].src)) {
            cuts = {j - 1};
        } else {
            const auto& c = w_.constraints[ci];
            const int i = c.src;
            if (c.owner.kind != Owner::Kind::Stack) {
                cuts = {i - 1, i, j - 1};
            } else if (i == S.front() || !solid(S, i - 1)) {
                cuts = {i, j - 1};
            } else {
                cuts = {i - 1};
                std::map<std::string, std::pair<int, int>> range;
                for (const auto& e : w_.constraints) {
                    if (!e.owner.is_clock_like() || !member(S, e.src) || !member(S, e.tgt)) continue;
                    if (!(e.src < i && i <= e.tgt)) continue;
                    auto [it, fresh] = range.try_emplace(clock_key(e.owner), e.src, e.src);
                    if (!fresh) {
                        it->second.first = std::min(it->second.first, e.src);
                        it->second.second = std::max(it->second.second, e.src);
                    }
                }
                for (const auto& [_, r] : range) {
                    cuts.push_back(r.first - 1);
                    cuts.push_back(r.second);
                }
            }
        }
        std::sort(cuts.begin(), cuts.end());
        cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
        std::deque<int> out;
        for (int p : cuts)
            if (solid(S, p)) out.push_back(p);
        return out;
    }

    int build(const std::vector<int>& S, std::deque<int> pending) {
        SplitNode node;
        node.label = label(S);
        if (is_atomic(node.label)) return add(std::move(node));

        auto comps = components(S);
        if (comps.size() > 1) return chain(comps, 0, pending);

        std::erase_if(pending, [&](int p) { return !solid(S, p); });
        if (pending.empty()) pending = plan(S);
        if (pending.empty()) throw Error(Errc::InternalInconsistency, "no move available on a connected component");
        node.kind = SplitNode::Kind::Unary;
        node.cut = pending.front();
        pending.pop_front();
        cut_.insert(node.cut);
        const int id = add(std::move(node));
        const int child = build(S, std::move(pending));
        tree_.nodes[id].left = child;
        return id;
    }

    int chain(const std::vector<std::vector<int>>& comps, size_t from, const std::deque<int>& pending) {
        auto share = [&](const std::vector<int>& C) {
            std::deque<int> mine;
            for (int p : pending)
                if (member(C, p) && member(C, p + 1)) mine.push_back(p);
            return mine;
        };
        if (from + 1 == comps.size()) return build(comps[from], share(comps[from]));
        std::vector<int> rest;
        for (size_t k = from; k < comps.size(); ++k) rest.insert(rest.end(), comps[k].begin(), comps[k].end());
        std::sort(rest.begin(), rest.end());
        SplitNode node;
        node.kind = SplitNode::Kind::Binary;
        node.label = label(rest);
        const int id = add(std::move(node));
        const int l = build(comps[from], share(comps[from]));
        const int r = chain(comps, from + 1, pending);
        tree_.nodes[id].left = l;
        tree_.nodes[id].right = r;
        return id;
    }
};

std::set<std::string> clocks_of(const Stcw& w) {
    std::set<std::string> out;
    for (const auto& c : w.constraints)
        if (c.owner.kind == Owner::Kind::Clock) out.insert(c.owner.clock);
    return out;
}

RoundPartition require_well_timed(const Stcw& w, int stacks, int rounds) {
    if (!is_simple(w)) throw Error(Errc::NotWellTimed, "word is not simple");
    auto r = check_well_timed(w, clocks_of(w), stacks, rounds);
    if (auto* v = std::get_if<WellTimedViolation>(&r)) {
        const Errc code = v->kind == WellTimedViolation::Kind::TooManyRounds ? Errc::TooManyRounds : Errc::NotWellTimed;
        throw Error(code, std::string(violation_name(v->kind)) + ": " + v->detail);
    }
    return std::get<RoundPartition>(r);
}

} // namespace

SplitTree decompose_ta(const Stcw& w) {
    require_well_timed(w, 0, 1);
    return Decomposer(w).run({});
}

SplitTree decompose_tpda(const Stcw& w) {
    require_well_timed(w, 1, 1);
    return Decomposer(w).run({});
}

SplitTree decompose_mpda(const Stcw& w, int stacks, int rounds) {
    if (stacks <= 1) return decompose_tpda(w);
    const auto part = require_well_timed(w, stacks, rounds);
    Decomposer d(w);
    return d.run(d.segment_cuts(part));
}

// ---------------------------------------------------------------- to terms

namespace {

struct Compiler {
    const SplitTree& T;

    // Colors are ranks of endpoints in position order, starting at 1.
    static std::map<int, int> colors(const SplitStcw& w) {
        std::map<int, int> out;
        int c = 1;
        for (int p : endpoints(w)) out[w.origin[p]] = c++;
        return out;
    }

    Term compile(int id) {
        const auto& n = T.at(id);
        switch (n.kind) {
        case SplitNode::Kind::Leaf: {
            const auto& w = n.label.word;
            if (w.size() == 1) return atom(1, w.labels[0]);
            const auto& c = w.constraints.at(0);
            return add_constraint(1, 2, c.iv, c.owner, combine(atom(1, w.labels[0]), atom(2, w.labels[1])));
        }
        case SplitNode::Kind::Unary: {
            const auto before = colors(T.at(n.left).label);
            const auto after = colors(n.label);
            const int a = before.at(n.cut), b = before.at(n.cut + 1);
            Term t = add_succ(a, b, compile(n.left));
            if (!after.count(n.cut)) t = forget(a, t);
            if (!after.count(n.cut + 1)) t = forget(b, t);
            std::vector<int> live;
            for (const auto& [p, c] : before)
                if (after.count(p)) live.push_back(c);
            for (size_t k = 0; k < live.size(); ++k) {
                const int want = static_cast<int>(k) + 1;
                if (live[k] != want) t = rename(live[k], want, t);
            }
            return t;
        }
        case SplitNode::Kind::Binary: {
            const auto target = colors(n.label);
            auto place = [&](int child) {
                Term t = compile(child);
                const auto own = colors(T.at(child).label);
                for (auto it = own.rbegin(); it != own.rend(); ++it) {
                    const int want = target.at(it->first);
                    if (want != it->second) t = rename(it->second, want, t);
                }
                return t;
            };
            return combine(place(n.left), place(n.right));
        }
        }
        throw Error(Errc::InternalInconsistency, "unknown split node kind");
    }
};

} // namespace

Term split_tree_to_stt(const SplitTree& T, int K) {
    if (T.root < 0) throw Error(Errc::InternalInconsistency, "empty split-tree");
    if (T.width() > K)
        throw Error(Errc::WidthExceeded, "split-tree width " + std::to_string(T.width()) + " exceeds " + std::to_string(K));
    return Compiler{T}.compile(T.root);
}

// ---------------------------------------------------------------- export

namespace {

const char* node_kind_name(SplitNode::Kind k) {
    switch (k) {
    case SplitNode::Kind::Leaf: return "leaf";
    case SplitNode::Kind::Unary: return "unary";
    case SplitNode::Kind::Binary: return "binary";
    }
    return "leaf";
}

// "a b | c" with root positions as subscripts.
std::string miniature(const SplitStcw& w) {
    std::string s;
    for (int k = 0; k < w.size(); ++k) {
        if (k > 0) s += w.hole[k - 1] ? " | " : " ";
        s += (w.word.labels[k].empty() ? std::string("ε") : w.word.labels[k]) + std::to_string(w.origin[k]);
    }
    return s;
}

} // namespace

json split_tree_to_json(const SplitTree& T) {
    json nodes = json::array();
    for (size_t id = 0; id < T.nodes.size(); ++id) {
        const auto& n = T.nodes[id];
        json children = json::array();
        if (n.left >= 0) children.push_back(n.left);
        if (n.right >= 0) children.push_back(n.right);
        nodes.push_back({{"id", id},
                         {"kind", node_kind_name(n.kind)},
                         {"cut", n.cut >= 0 ? json::array({n.cut, n.cut + 1}) : json(nullptr)},
                         {"children", children},
                         {"width", n.label.width()},
                         {"label", stcw_to_json(n.label)}});
    }
    return {{"root", T.root}, {"width", T.width()}, {"nodes", nodes}};
}

std::string split_tree_to_dot(const SplitTree& T, const std::string& name) {
    std::string out = "digraph " + name + " {\n  node [shape=box, fontname=\"monospace\"];\n";
    for (size_t id = 0; id < T.nodes.size(); ++id) {
        const auto& n = T.nodes[id];
        out += "  n" + std::to_string(id) + " [label=\"" + miniature(n.label) + "\\nwidth " +
               std::to_string(n.label.width()) + "\"];\n";
    }
    for (size_t id = 0; id < T.nodes.size(); ++id) {
        const auto& n = T.nodes[id];
        if (n.left >= 0) {
            out += "  n" + std::to_string(id) + " -> n" + std::to_string(n.left);
            if (n.kind == SplitNode::Kind::Unary)
                out += " [label=\"cut " + std::to_string(n.cut) + "-" + std::to_string(n.cut + 1) + "\"]";
            out += ";\n";
        }
        if (n.right >= 0) out += "  n" + std::to_string(id) + " -> n" + std::to_string(n.right) + ";\n";
    }
    return out + "}\n";
}

} // namespace tcwta
