// Copyright (c) tcwta contributors.
// SPDX-License-Identifier: Apache-2.0
#include "tcwta/stt.hpp"

#include <algorithm>
#include <optional>

namespace tcwta {

namespace {

Term make(SttNode n) { return std::make_shared<const SttNode>(std::move(n)); }

int next_in(const std::set<int>& p, int i) {
    auto it = p.upper_bound(i);
    return it == p.end() ? -1 : *it;
}

int prev_in(const std::set<int>& p, int i) {
    auto it = p.lower_bound(i);
    return it == p.begin() ? 0 : *std::prev(it);
}

void swap_colors(std::set<int>& p, int i, int j) {
    const bool hi = p.count(i) > 0, hj = p.count(j) > 0;
    p.erase(i);
    p.erase(j);
    if (hi) p.insert(j);
    if (hj) p.insert(i);
}

std::map<int, int> eval_into(const SttNode& n, ColoredGraph& g) {
    using K = SttNode::Kind;
    switch (n.kind) {
    case K::Atom: {
        g.labels.push_back(n.label);
        return {{n.i, g.size() - 1}};
    }
    case K::AddSucc:
    case K::AddConstraint: {
        auto chi = eval_into(*n.left, g);
        auto a = chi.find(n.i), b = chi.find(n.j);
        if (a != chi.end() && b != chi.end()) {
            if (n.kind == K::AddSucc)
                g.succ.emplace_back(a->second, b->second);
            else
                g.constraints.push_back({a->second, b->second, n.iv, n.owner});
        }
        return chi;
    }
    case K::Forget: {
        auto chi = eval_into(*n.left, g);
        chi.erase(n.i);
        return chi;
    }
    case K::Rename: {
        auto chi = eval_into(*n.left, g);
        auto a = chi.find(n.i), b = chi.find(n.j);
        std::optional<int> vi, vj;
        if (a != chi.end()) vi = a->second;
        if (b != chi.end()) vj = b->second;
        chi.erase(n.i);
        chi.erase(n.j);
        if (vi) chi[n.j] = *vi;
        if (vj) chi[n.i] = *vj;
        return chi;
    }
    case K::Combine: {
        auto l = eval_into(*n.left, g);
        auto r = eval_into(*n.right, g);
        for (const auto& [c, v] : r) {
            if (l.count(c)) throw Error(Errc::ColorClash, "color " + std::to_string(c) + " is live on both sides of a combine");
            l[c] = v;
        }
        return l;
    }
    }
    return {};
}

} // namespace

Term atom(int color, std::string label) {
    SttNode n;
    n.kind = SttNode::Kind::Atom;
    n.i = color;
    n.label = std::move(label);
    return make(std::move(n));
}

Term add_succ(int i, int j, Term child) {
    SttNode n;
    n.kind = SttNode::Kind::AddSucc;
    n.i = i;
    n.j = j;
    n.left = std::move(child);
    return make(std::move(n));
}

Term add_constraint(int i, int j, Interval iv, Owner owner, Term child) {
    SttNode n;
    n.kind = SttNode::Kind::AddConstraint;
    n.i = i;
    n.j = j;
    n.iv = iv;
    n.owner = std::move(owner);
    n.left = std::move(child);
    return make(std::move(n));
}

Term forget(int i, Term child) {
    SttNode n;
    n.kind = SttNode::Kind::Forget;
    n.i = i;
    n.left = std::move(child);
    return make(std::move(n));
}

Term rename(int i, int j, Term child) {
    SttNode n;
    n.kind = SttNode::Kind::Rename;
    n.i = i;
    n.j = j;
    n.left = std::move(child);
    return make(std::move(n));
}

Term combine(Term left, Term right) {
    SttNode n;
    n.kind = SttNode::Kind::Combine;
    n.left = std::move(left);
    n.right = std::move(right);
    return make(std::move(n));
}

Term atomic_pair(int i, std::string a, int j, std::string b, Interval iv, Owner owner) {
    Term t = add_constraint(1, 2, iv, std::move(owner), combine(atom(1, std::move(a)), atom(2, std::move(b))));
    if (j != 2) t = rename(2, j, t);
    if (i != 1) t = rename(1, i, t);
    return t;
}

bool structurally_equal(const Term& a, const Term& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    if (a->kind != b->kind || a->i != b->i || a->j != b->j || a->label != b->label || a->iv != b->iv || a->owner != b->owner)
        return false;
    return structurally_equal(a->left, b->left) && structurally_equal(a->right, b->right);
}

int term_depth(const Term& t) {
    if (!t) return 0;
    return 1 + std::max(term_depth(t->left), term_depth(t->right));
}

int term_leaves(const Term& t) {
    if (!t) return 0;
    if (t->kind == SttNode::Kind::Atom) return 1;
    return term_leaves(t->left) + term_leaves(t->right);
}

ColoredGraph eval(const Term& t) {
    ColoredGraph g;
    g.chi = eval_into(*t, g);
    return g;
}

LinearGraph linearize(const ColoredGraph& g) {
    RawGraph raw;
    for (int v = 0; v < g.size(); ++v) raw.positions.push_back({v, g.labels[v]});
    raw.succ = g.succ;
    raw.constraints = g.constraints;
    LinearGraph out;
    out.word = validate_tcw(raw);
    out.vertex = out.word.origin;
    std::vector<int> pos(g.size());
    for (int p = 0; p < out.word.size(); ++p) pos[out.vertex[p]] = p;
    for (const auto& [c, v] : g.chi) out.colored[c] = pos[v];
    return out;
}

std::set<int> live_colors(const Term& t) {
    using K = SttNode::Kind;
    switch (t->kind) {
    case K::Atom: return {t->i};
    case K::AddSucc:
    case K::AddConstraint: return live_colors(t->left);
    case K::Forget: {
        auto p = live_colors(t->left);
        p.erase(t->i);
        return p;
    }
    case K::Rename: {
        auto p = live_colors(t->left);
        swap_colors(p, t->i, t->j);
        return p;
    }
    case K::Combine: {
        auto p = live_colors(t->left);
        auto q = live_colors(t->right);
        p.insert(q.begin(), q.end());
        return p;
    }
    }
    return {};
}

namespace {

// Returns the live set, or nullopt as soon as a violation is found.
std::optional<std::set<int>> monotone_live(const SttNode& n) {
    using K = SttNode::Kind;
    if (n.kind == K::Atom) return std::set<int>{n.i};
    auto p = monotone_live(*n.left);
    if (!p) return std::nullopt;
    switch (n.kind) {
    case K::Atom: break;
    case K::AddSucc:
        if (next_in(*p, n.i) != n.j) return std::nullopt;
        break;
    case K::AddConstraint:
        if (!(n.i < n.j)) return std::nullopt;
        break;
    case K::Forget: p->erase(n.i); break;
    case K::Rename: {
        const int nx = next_in(*p, n.i);
        if (!(prev_in(*p, n.i) < n.j && (nx == -1 || n.j < nx))) return std::nullopt;
        swap_colors(*p, n.i, n.j);
        break;
    }
    case K::Combine: {
        auto q = monotone_live(*n.right);
        if (!q) return std::nullopt;
        for (int c : *q) {
            if (!p->insert(c).second) return std::nullopt;
        }
        break;
    }
    }
    return p;
}

bool km_ok(const SttNode& n, int K, int64_t M) {
    using Kd = SttNode::Kind;
    auto color_ok = [&](int c) { return c >= 1 && c <= 2 * K; };
    switch (n.kind) {
    case Kd::Atom: return color_ok(n.i);
    case Kd::AddSucc:
    case Kd::Rename: return color_ok(n.i) && color_ok(n.j) && km_ok(*n.left, K, M);
    case Kd::Forget: return color_ok(n.i) && km_ok(*n.left, K, M);
    case Kd::AddConstraint: {
        if (!color_ok(n.i) || !color_ok(n.j) || !(n.i < n.j) || !n.iv.within(M)) return false;
        const auto& c = *n.left;
        if (c.kind != Kd::Combine || c.left->kind != Kd::Atom || c.right->kind != Kd::Atom) return false;
        const std::set<int> cs{c.left->i, c.right->i};
        return cs == std::set<int>{n.i, n.j} && km_ok(c, K, M);
    }
    case Kd::Combine: return km_ok(*n.left, K, M) && km_ok(*n.right, K, M);
    }
    return false;
}

} // namespace

bool is_monotonic(const Term& t) { return monotone_live(*t).has_value(); }

bool is_km_stt(const Term& t, int K, int64_t M) { return km_ok(*t, K, M); }

int max_color(const Term& t) {
    if (!t) return 0;
    return std::max({t->i, t->j, max_color(t->left), max_color(t->right)});
}

} // namespace tcwta
