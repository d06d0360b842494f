// Copyright (c) tcwta contributors.
// SPDX-License-Identifier: Apache-2.0
#include "tcwta/validity.hpp"

#include <algorithm>
#include <unordered_map>

namespace tcwta {

ColorSet ValidityState::left_endpoints() const {
    ColorSet out = 0;
    bool start = true;
    for (ColorSet rest = P; rest; rest &= rest - 1) {
        const int c = std::countr_zero(rest);
        if (start) out |= bit(c);
        start = !has(sd, c);
    }
    return out;
}

std::string ValidityState::str() const {
    std::string s = "{";
    for (ColorSet rest = P; rest; rest &= rest - 1) {
        const int c = std::countr_zero(rest);
        if (s.size() > 1) s += ' ';
        s += std::to_string(c) + ":" + std::to_string(tsm[c]) + (has(sd, c) ? "s" : "") + (has(ac, c) ? "a" : "");
    }
    return s + "}";
}

size_t ValidityStateHash::operator()(const ValidityState& q) const {
    size_t h = std::hash<uint64_t>{}(q.P) ^ (std::hash<uint64_t>{}(q.sd) * 31) ^ (std::hash<uint64_t>{}(q.ac) * 131);
    for (ColorSet rest = q.P; rest; rest &= rest - 1) h = h * 1000003U + q.tsm[std::countr_zero(rest)];
    return h;
}

int d(const ValidityState& q, int i, int j, int M) {
    return ((static_cast<int>(q.tsm[j]) - static_cast<int>(q.tsm[i])) % M + M) % M;
}

int64_t D(const ValidityState& q, int i, int j, int M) {
    int64_t sum = 0;
    for (int k = i; k < j;) {
        const int n = next_of(q.P, k);
        if (n < 0 || n > j) break;
        sum += d(q, k, n, M);
        k = n;
    }
    return sum;
}

bool AC(const ValidityState& q, int i, int j) {
    if (j <= i) return true;
    const ColorSet range = q.P & (bit(j) - 1) & ~(bit(i) - 1);
    return (range & ~q.ac) == 0;
}

std::vector<ValidityState> delta_atom(int i, int M) {
    std::vector<ValidityState> out;
    for (int t = 0; t < M; ++t) {
        ValidityState q;
        q.P = bit(i);
        q.tsm[i] = static_cast<uint8_t>(t);
        out.push_back(q);
    }
    return out;
}

std::optional<ValidityState> delta_rename(const ValidityState& q, int i, int j) {
    if (!has(q.P, i)) return std::nullopt;
    const int nx = next_of(q.P, i);
    if (!(prev_of(q.P, i) < j && (nx < 0 || j < nx)) || j < 1 || j > kMaxColor) return std::nullopt;
    if (i == j) return q;
    ValidityState r = q;
    r.P = (q.P & ~bit(i)) | bit(j);
    r.sd = (q.sd & ~bit(i)) | (has(q.sd, i) ? bit(j) : 0);
    r.ac = (q.ac & ~bit(i)) | (has(q.ac, i) ? bit(j) : 0);
    r.tsm[j] = q.tsm[i];
    r.tsm[i] = 0;
    return r;
}

std::optional<ValidityState> delta_forget(const ValidityState& q, int i, int M) {
    if (!has(q.P, i)) return std::nullopt;
    const int lo = prev_of(q.P, i), hi = next_of(q.P, i);
    if (lo == 0 || hi < 0 || !has(q.sd, lo) || !has(q.sd, i)) return std::nullopt;
    ValidityState r = q;
    const bool acc = AC(q, lo, hi) && D(q, lo, hi, M) < M;
    r.P &= ~bit(i);
    r.sd &= ~bit(i);
    r.ac &= ~bit(i);
    r.tsm[i] = 0;
    r.ac = acc ? (r.ac | bit(lo)) : (r.ac & ~bit(lo));
    return r;
}

std::optional<ValidityState> delta_add_succ(const ValidityState& q, int i, int j) {
    if (!has(q.P, i) || !has(q.P, j) || next_of(q.P, i) != j || has(q.sd, i)) return std::nullopt;
    ValidityState r = q;
    r.sd |= bit(i);
    return r;
}

std::optional<ValidityState> delta_add_constraint(const ValidityState& q, int i, int j, const Interval& iv, int M) {
    if (!has(q.P, i) || !has(q.P, j) || !(i < j)) return std::nullopt;
    const bool acc = AC(q, i, j);
    if (acc ? iv.contains(D(q, i, j, M)) : !iv.bounded()) return q;
    return std::nullopt;
}

std::vector<ValidityState> delta_combine(const ValidityState& q1, const ValidityState& q2, int M) {
    if (q1.P & q2.P) throw Error(Errc::ColorOverlap, "combine of overlapping color sets");
    ValidityState base;
    base.P = q1.P | q2.P;
    base.sd = q1.sd | q2.sd;
    for (int c = 0; c <= kMaxColor; ++c) base.tsm[c] = has(q1.P, c) ? q1.tsm[c] : q2.tsm[c];
    const ValidityState* side[2] = {&q1, &q2};
    // Shuffle condition; forced ac values where the same-side neighbour stays adjacent.
    std::vector<int> free;
    const int top = max_of(base.P);
    for (int b = 0; b < 2; ++b) {
        const auto& qb = *side[b];
        for (ColorSet rest = qb.P; rest; rest &= rest - 1) {
            const int c = std::countr_zero(rest);
            const int nb = next_of(qb.P, c);
            const int np = next_of(base.P, c);
            if (has(qb.sd, c) && np != nb) return {};
            if (c == top) continue;
            if (np == nb) {
                if (has(qb.ac, c)) base.ac |= bit(c);
            } else {
                free.push_back(c);
            }
        }
    }
    std::vector<ValidityState> out;
    const size_t combos = size_t{1} << free.size();
    for (size_t mask = 0; mask < combos; ++mask) {
        ValidityState q = base;
        for (size_t k = 0; k < free.size(); ++k) {
            if ((mask >> k) & 1U) q.ac |= bit(free[k]);
        }
        bool ok = true;
        for (int b = 0; b < 2 && ok; ++b) {
            const auto& qb = *side[b];
            const int mb = max_of(qb.P);
            for (ColorSet rest = qb.P & ~bit(mb); rest && ok; rest &= rest - 1) {
                const int c = std::countr_zero(rest);
                const int nb = next_of(qb.P, c);
                const bool want = AC(q, c, nb) && D(q, c, nb, M) < M;
                ok = want == has(qb.ac, c);
            }
        }
        if (ok) out.push_back(q);
    }
    return out;
}

bool is_accepting(const ValidityState& q) {
    const int n = q.size();
    if (n == 1) return true;
    if (n != 2) return false;
    const int i = min_of(q.P), j = max_of(q.P);
    return has(q.sd, i) && !has(q.sd, j) && !has(q.ac, j);
}

ValidityState shifted(const ValidityState& q, int c, int M) {
    ValidityState r = q;
    for (ColorSet rest = q.P; rest; rest &= rest - 1) {
        const int k = std::countr_zero(rest);
        r.tsm[k] = static_cast<uint8_t>((q.tsm[k] + c) % M);
    }
    return r;
}

ValidityState normalized(const ValidityState& q, int M) {
    if (!q.P) return q;
    return shifted(q, (M - q.tsm[min_of(q.P)]) % M, M);
}

namespace {

using StateSet = std::vector<ValidityState>; // sorted, unique, tsm-normalized

struct Evaluator {
    int K, M;
    std::unordered_map<const SttNode*, StateSet> memo;

    void finish(StateSet& s) {
        std::erase_if(s, [&](const ValidityState& q) { return q.blocks() > K; });
        std::sort(s.begin(), s.end());
        s.erase(std::unique(s.begin(), s.end()), s.end());
    }

    const StateSet& eval(const Term& t) {
        if (auto it = memo.find(t.get()); it != memo.end()) return it->second;
        StateSet out = compute(*t);
        finish(out);
        return memo.emplace(t.get(), std::move(out)).first->second;
    }

    StateSet compute(const SttNode& n) {
        using Kd = SttNode::Kind;
        auto color_ok = [&](int c) { return c >= 1 && c <= 2 * K && c <= kMaxColor; };
        StateSet out;
        switch (n.kind) {
        case Kd::Atom:
            if (color_ok(n.i)) out.push_back(delta_atom(n.i, M).front());
            return out;
        case Kd::Rename:
            if (!color_ok(n.j)) return out;
            for (const auto& q : eval(n.left))
                if (auto r = delta_rename(q, n.i, n.j)) out.push_back(normalized(*r, M));
            return out;
        case Kd::Forget:
            for (const auto& q : eval(n.left))
                if (auto r = delta_forget(q, n.i, M)) out.push_back(normalized(*r, M));
            return out;
        case Kd::AddSucc:
            for (const auto& q : eval(n.left))
                if (auto r = delta_add_succ(q, n.i, n.j)) out.push_back(*r);
            return out;
        case Kd::AddConstraint: {
            const auto& c = *n.left;
            if (c.kind != Kd::Combine || c.left->kind != Kd::Atom || c.right->kind != Kd::Atom) return out;
            if (!n.iv.within(M)) return out;
            for (const auto& q : eval(n.left))
                if (auto r = delta_add_constraint(q, n.i, n.j, n.iv, M)) out.push_back(*r);
            return out;
        }
        case Kd::Combine: {
            const auto& l = eval(n.left);
            const auto& r = eval(n.right);
            for (const auto& q1 : l) {
                for (const auto& q2 : r) {
                    if (q1.P & q2.P) return {};
                    for (int c = 0; c < M; ++c) {
                        for (auto& q : delta_combine(q1, shifted(q2, c, M), M)) out.push_back(normalized(q, M));
                    }
                }
            }
            return out;
        }
        }
        return out;
    }
};

} // namespace

std::vector<ValidityState> reachable_states(const Term& t, int K, int M) {
    Evaluator ev{K, M, {}};
    std::vector<ValidityState> out;
    for (const auto& q : ev.eval(t)) {
        for (int c = 0; c < M; ++c) out.push_back(shifted(q, c, M));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

bool accepts(const Term& t, int K, int M) {
    Evaluator ev{K, M, {}};
    const auto& root = ev.eval(t);
    return std::any_of(root.begin(), root.end(), [](const ValidityState& q) { return is_accepting(q); });
}

} // namespace tcwta
