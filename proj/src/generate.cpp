// Copyright (c) tcwta contributors.
// SPDX-License-Identifier: Apache-2.0
#include "tcwta/generate.hpp"

#include <algorithm>
#include <map>

namespace tcwta {

namespace {

struct Piece {
    Term t;
    // Live color -> (has a successor edge, has a predecessor edge).
    std::map<int, std::pair<bool, bool>> links;
};

struct Gen {
    Rng& rng;
    int K, M;

    bool coin(double p) { return std::uniform_real_distribution<double>(0, 1)(rng) < p; }
    int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
    std::string letter() { return std::string(1, static_cast<char>('a' + uniform(0, 2))); }

    Interval interval() {
        const int lo = uniform(0, M - 1);
        if (coin(0.4)) return Interval::at_least(lo);
        return Interval::closed(lo, uniform(lo, M - 1));
    }

    Piece leaf() {
        const int c = uniform(1, 2 * K);
        return {atom(c, letter()), {{c, {false, false}}}};
    }

    Piece pair() {
        int i = uniform(1, 2 * K - 1);
        int j = uniform(i + 1, 2 * K);
        Term t = add_constraint(i, j, interval(), {}, combine(atom(i, letter()), atom(j, letter())));
        return {t, {{i, {false, false}}, {j, {false, false}}}};
    }

    // Order-preserving move of p's colors onto `target`.
    bool relocate(Piece& p, const std::vector<int>& target) {
        std::vector<int> cur;
        for (const auto& [c, _] : p.links) cur.push_back(c);
        for (int round = 0; round < 4 * static_cast<int>(cur.size()) + 4; ++round) {
            bool done = true;
            for (size_t k = 0; k < cur.size(); ++k) {
                if (cur[k] == target[k]) continue;
                done = false;
                const int lo = k == 0 ? 0 : cur[k - 1];
                const int hi = k + 1 == cur.size() ? 2 * K + 1 : cur[k + 1];
                if (lo < target[k] && target[k] < hi) {
                    p.t = rename(cur[k], target[k], p.t);
                    p.links[target[k]] = p.links[cur[k]];
                    p.links.erase(cur[k]);
                    cur[k] = target[k];
                }
            }
            if (done) return true;
        }
        return false;
    }

    void close_up(Piece& p) {
        std::vector<int> cs;
        for (const auto& [c, _] : p.links) cs.push_back(c);
        for (size_t k = 0; k + 1 < cs.size(); ++k) {
            auto& a = p.links[cs[k]];
            auto& b = p.links[cs[k + 1]];
            const bool fits = !a.first && !b.second;
            if ((fits && coin(0.6)) || coin(0.03)) {
                p.t = add_succ(cs[k], cs[k + 1], p.t);
                a.first = b.second = true;
            }
        }
        for (int c : cs) {
            const auto [out, in] = p.links[c];
            if ((out && in && coin(0.75)) || coin(0.03)) {
                p.t = forget(c, p.t);
                p.links.erase(c);
            }
        }
    }

    Piece build(int n) {
        if (n == 1) return leaf();
        if (n == 2 && coin(0.5)) return pair();
        const int a = uniform(1, n - 1);
        Piece l = build(a), r = build(n - a);
        if (l.links.size() + r.links.size() > static_cast<size_t>(2 * K)) return l;
        std::vector<int> free;
        for (int c = 1; c <= 2 * K; ++c)
            if (!l.links.count(c)) free.push_back(c);
        std::shuffle(free.begin(), free.end(), rng);
        free.resize(r.links.size());
        std::sort(free.begin(), free.end());
        if (!relocate(r, free)) return l;
        if (coin(0.5)) std::swap(l, r);
        Piece out{combine(l.t, r.t), l.links};
        out.links.insert(r.links.begin(), r.links.end());
        close_up(out);
        return out;
    }
};

} // namespace

Term random_monotone_term(Rng& rng, int K, int M, int max_leaves) {
    Gen g{rng, K, M};
    for (;;) {
        Term t = g.build(g.uniform(1, max_leaves)).t;
        if (is_monotonic(t) && is_km_stt(t, K, M)) return t;
    }
}

RandomRun random_run(Rng& rng, ModelKind kind, int clocks, int stacks, int rounds, int max_steps, int M) {
    Gen g{rng, 1, M};
    const int n = kind == ModelKind::TA ? 0 : kind == ModelKind::TPDA ? 1 : std::max(stacks, 1);
    const int k = kind == ModelKind::DTMPDA ? std::max(rounds, 1) : 1;
    RandomRun out;
    auto& S = out.system;
    S.kind = kind;
    S.stacks = n;
    S.rounds = k;
    for (int x = 0; x < clocks; ++x) S.clocks.push_back("x" + std::to_string(x));
    if (n > 0) S.stack_alphabet = {"g", "h"};

    // Stack operations per (round, stack) context; nops are sprinkled in between.
    std::vector<StackOp> ops;
    std::vector<std::vector<std::string>> content(n + 1);
    const int budget = std::max(1, max_steps / std::max(1, 2 * n * k));
    for (int i = 1; i <= k; ++i) {
        for (int h = 1; h <= n; ++h) {
            auto& st = content[h];
            for (int c = g.uniform(0, budget); c > 0; --c) {
                StackOp op;
                op.stack = h;
                if (!st.empty() && g.coin(0.5)) {
                    op.kind = StackOp::Kind::Pop;
                    op.sym = st.back();
                    op.iv = g.interval();
                    st.pop_back();
                } else {
                    op.kind = StackOp::Kind::Push;
                    op.sym = g.coin(0.5) ? "g" : "h";
                    st.push_back(op.sym);
                }
                ops.push_back(op);
            }
            if (i < k) continue;
            while (!st.empty()) {
                ops.push_back({StackOp::Kind::Pop, h, st.back(), g.interval()});
                st.pop_back();
            }
        }
    }
    std::vector<StackOp> steps;
    for (const auto& op : ops) {
        while (g.coin(0.3)) steps.emplace_back();
        steps.push_back(op);
    }
    for (int c = g.uniform(n == 0 ? 1 : 0, std::max(1, max_steps - static_cast<int>(steps.size()))); c > 0; --c)
        steps.insert(steps.begin() + g.uniform(0, static_cast<int>(steps.size())), StackOp{});

    const int len = static_cast<int>(steps.size());
    for (int s = 0; s <= len; ++s) S.states.push_back("s" + std::to_string(s));
    S.final = {len};
    for (int t = 0; t < len; ++t) {
        Transition d;
        d.from = t;
        d.to = t + 1;
        d.letter = g.coin(0.1) ? "" : g.letter();
        for (const auto& x : S.clocks)
            if (g.coin(0.4)) d.guard.push_back({x, g.interval()});
        for (const auto& x : S.clocks)
            if (g.coin(0.3)) d.resets.push_back(x);
        d.op = steps[t];
        S.transitions.push_back(std::move(d));
        out.run.push_back(t);
    }
    for (const auto& d : S.transitions)
        if (!d.letter.empty() && std::find(S.alphabet.begin(), S.alphabet.end(), d.letter) == S.alphabet.end())
            S.alphabet.push_back(d.letter);
    return out;
}

} // namespace tcwta
