// Copyright (c) tcwta contributors.
// SPDX-License-Identifier: Apache-2.0
#include "tcwta/emptiness.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <set>
#include <sstream>

#include "tcwta/stt_io.hpp"

namespace tcwta {

namespace {

struct TermOp {
    enum class Kind : uint8_t { Rename, Forget, AddSucc };
    Kind kind;
    uint8_t i, j;
};

struct Step {
    Term leaf; // leaves only
    std::vector<PointGuess> guesses;
    std::vector<TermOp> left_ops, right_ops, post_ops;
};

Term apply(Term t, const std::vector<TermOp>& ops) {
    for (const auto& op : ops) {
        switch (op.kind) {
        case TermOp::Kind::Rename: t = rename(op.i, op.j, t); break;
        case TermOp::Kind::Forget: t = forget(op.i, t); break;
        case TermOp::Kind::AddSucc: t = add_succ(op.i, op.j, t); break;
        }
    }
    return t;
}

// Blocks of a state as (first color, last color).
std::vector<std::pair<int, int>> color_blocks(const ValidityState& q) {
    std::vector<std::pair<int, int>> out;
    int first = -1;
    for (ColorSet rest = q.P; rest; rest &= rest - 1) {
        const int c = std::countr_zero(rest);
        if (first < 0) first = c;
        if (!has(q.sd, c)) {
            out.emplace_back(first, c);
            first = -1;
        }
    }
    return out;
}

// Search over states whose colors are exactly the block endpoints, numbered
// 1..m in position order.
//
// Pushdown kinds: blocks form one connected piece; binary steps combine two
// pieces and immediately link them by a succ edge.
// Timed automata: a state is a run prefix whose gaps are reset loops or an
// entry point still waiting for their later partner, and binary steps add one
// leaf to it. Such prefixes have at most |X|+2 blocks.
class SystemSearch {
  public:
    using Search = TreeSearch<SystemState, Step, SystemStateHash>;

    SystemSearch(const TimedSystem& S, int K, int M) : A_(S, K, M), prefix_(S.kind == ModelKind::TA) { build_reach(); }

    Search::Rules rules() {
        Search::Rules r;
        r.leaves = [this] { return leaves(); };
        r.unary = [this](const SystemState& s) { return unary(s); };
        r.binary = [this](const SystemState& a, const SystemState& b) { return binary(a, b); };
        r.accepting = [this](const SystemState& s) { return A_.accepting(s); };
        r.group = [this](const SystemState& s) { return shape_of(s); };
        r.compatible = [this](int g, int h) { return shapes_compatible(g, h); };
        if (prefix_) return r; // leaf partners may sit across a hole
        r.tags = [](const SystemState& s) {
            std::vector<int32_t> out;
            for (const auto& [a, b] : color_blocks(s.q)) out.push_back(s.src[a]);
            return out;
        };
        r.partner_tags = [this](const SystemState& s) {
            std::vector<int32_t> out;
            for (const auto& [a, b] : color_blocks(s.q))
                for (int16_t m : eps_successors(s.tgt[b])) out.push_back(m);
            return out;
        };
        return r;
    }

    const SystemAutomaton& automaton() const { return A_; }

  private:
    // Block orders of a pair in which consecutive blocks can be joined by
    // stage paths and some boundary between the two sides is linkable.
    struct Interleaving {
        uint32_t mask = 0;      // bit p set: block p comes from the second state
        std::vector<int> cross; // boundaries p|p+1 linkable now
    };

    struct BlockStages {
        int n = 0;
        std::array<int16_t, kMaxColor + 1> src{}, tgt{};
    };

    SystemAutomaton A_;
    bool prefix_;
    std::vector<bool> leaf_shape_;
    std::map<int16_t, std::vector<int16_t>> eps_cache_;
    // reach_[a] bit b: some chain of points leads from stage a to stage b.
    std::vector<std::vector<uint64_t>> reach_;
    std::vector<bool> to_final_;
    std::unordered_map<SystemState, int, SystemStateHash> shapes_;
    std::vector<BlockStages> shape_stages_;
    std::vector<int> once_; // per stage: its transition if that transition fires at most once, else -1

    [[nodiscard]] bool reach(int16_t a, int16_t b) const {
        return a >= 0 && b >= 0 && ((reach_[a][b >> 6] >> (b & 63)) & 1U);
    }

    void build_reach() {
        const auto& mt = A_.micro();
        const int n = mt.size();
        std::vector<std::vector<int16_t>> next(n);
        for (int t = 0; t < transition_count_with_dummy(A_.system()); ++t) {
            const auto d = transition_at(A_.system(), t);
            for (const auto& pt : micro_decompose(A_.system(), t, std::vector<int>(d.resets.size(), 1)))
                next[mt.encode(pt.src)].push_back(mt.encode(pt.tgt));
        }
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                if (a != b && mt.eps_path(static_cast<int16_t>(a), static_cast<int16_t>(b))) next[a].push_back(static_cast<int16_t>(b));
        const size_t words = (static_cast<size_t>(n) + 63) / 64;
        reach_.assign(n, std::vector<uint64_t>(words, 0));
        for (int a = 0; a < n; ++a) {
            auto& row = reach_[a];
            std::vector<int16_t> todo{static_cast<int16_t>(a)};
            row[a >> 6] |= uint64_t{1} << (a & 63);
            while (!todo.empty()) {
                const int16_t x = todo.back();
                todo.pop_back();
                for (int16_t y : next[x])
                    if (!((row[y >> 6] >> (y & 63)) & 1U)) {
                        row[y >> 6] |= uint64_t{1} << (y & 63);
                        todo.push_back(y);
                    }
            }
        }
        to_final_.assign(n, false);
        for (int a = 0; a < n; ++a)
            for (int f : A_.system().final) to_final_[a] = to_final_[a] || reach(static_cast<int16_t>(a), mt.state(f));
        once_.assign(n, -1);
        for (int a = 0; a < n; ++a) {
            const auto m = mt.decode(static_cast<int16_t>(a));
            if (m.trans < 0) continue;
            const auto d = transition_at(A_.system(), m.trans);
            const int16_t from = d.from == static_cast<int>(A_.system().states.size()) ? mt.dummy_source() : mt.state(d.from);
            if (!reach(mt.state(d.to), from)) once_[a] = m.trans;
        }
    }

    // Necessary conditions for occurring inside an accepting word: the gaps
    // between blocks can be filled, and points of one transition occurrence
    // share a timestamp (a block not linked across an exit point, or any
    // points of a transition that fires at most once).
    [[nodiscard]] bool viable(const SystemState& s) const {
        const auto bl = color_blocks(s.q);
        if (bl.empty()) return false;
        if (!reach(A_.micro().dummy_source(), s.src[bl.front().first])) return false;
        for (size_t k = 0; k + 1 < bl.size(); ++k)
            if (!reach(s.tgt[bl[k].second], s.src[bl[k + 1].first])) return false;
        const int16_t last = s.tgt[bl.back().second];
        if (last < 0 || !to_final_[last]) return false;

        for (const auto& [a, b] : bl) {
            if (a == b || has(s.spans, a)) continue;
            for (int c = a; c < b; c = next_of(s.q.P, c))
                if (!has(s.q.ac, c) || s.q.tsm[next_of(s.q.P, c)] != s.q.tsm[a]) return false;
        }
        std::map<int, std::pair<int, int>> span; // transition -> first and last color
        auto note = [&](int16_t m, int c) {
            if (m < 0 || once_[m] < 0) return;
            auto [it, fresh] = span.try_emplace(once_[m], c, c);
            if (!fresh) it->second = {std::min(it->second.first, c), std::max(it->second.second, c)};
        };
        for (ColorSet rest = s.q.P; rest; rest &= rest - 1) {
            const int c = std::countr_zero(rest);
            note(s.src[c], c);
            note(s.tgt[c], c);
        }
        for (const auto& [t, lh] : span) {
            const auto [lo, hi] = lh;
            for (int c = lo; c < hi; c = next_of(s.q.P, c))
                if (!has(s.q.ac, c) || s.q.tsm[next_of(s.q.P, c)] != s.q.tsm[lo]) return false;
        }
        return true;
    }

    // Prefix mode: a gap holds only reset loops of one transition or a single entry point.
    [[nodiscard]] bool source_gap(int16_t u, int16_t v) const {
        const auto& mt = A_.micro();
        if (mt.eps_path(u, v)) return true;
        const auto a = mt.decode(u), b = mt.decode(v);
        return a.trans < 0 && b.trans >= 0 && b.stage == 0 && transition_at(A_.system(), b.trans).from == a.stage;
    }

    [[nodiscard]] bool prefix_shaped(const SystemState& s) const {
        const auto bl = color_blocks(s.q);
        if (!source_gap(A_.micro().dummy_source(), s.src[bl.front().first])) return false;
        for (size_t k = 0; k + 1 < bl.size(); ++k)
            if (!source_gap(s.tgt[bl[k].second], s.src[bl[k + 1].first])) return false;
        return true;
    }

    void keep_viable(Search::Produced& out, bool leaf = false) const {
        std::erase_if(out, [&](const auto& e) { return !viable(e.first) || (prefix_ && !leaf && !prefix_shaped(e.first)); });
    }

    const std::vector<int16_t>& eps_successors(int16_t m) {
        auto it = eps_cache_.find(m);
        if (it != eps_cache_.end()) return it->second;
        std::vector<int16_t> out;
        for (int k = 0; k < A_.micro().size(); ++k)
            if (A_.micro().eps_path(m, static_cast<int16_t>(k))) out.push_back(static_cast<int16_t>(k));
        return eps_cache_.emplace(m, std::move(out)).first->second;
    }

    // Unused stage fields are blanked so that equivalent states coincide.
    static SystemState canon(SystemState s) {
        for (const auto& [a, b] : color_blocks(s.q)) {
            if (a == b) continue;
            s.tgt[a] = -1;
            s.src[b] = -1;
        }
        return s;
    }

    Search::Produced leaves() {
        Search::Produced out;
        std::set<std::string> letters;
        for (const auto& d : A_.system().transitions)
            if (d.op.kind == StackOp::Kind::Nop) letters.insert(d.letter);
        for (const auto& a : letters)
            for (auto& g : A_.atom(1, a)) out.emplace_back(canon(g.state), Step{atom(1, a), g.points, {}, {}, {}});

        struct PairShape {
            Interval iv;
            Owner owner;
            std::string a, b;
            auto operator<=>(const PairShape&) const = default;
        };
        std::set<PairShape> shapes{{Interval::zero(), Owner::zeta(), "", ""}};
        for (const auto& d : A_.system().transitions) {
            for (const auto& g : d.guard) shapes.insert({g.iv, Owner::of_clock(g.clock), "", ""});
            if (d.op.kind != StackOp::Kind::Pop) continue;
            for (const auto& e : A_.system().transitions)
                if (e.op.kind == StackOp::Kind::Push && e.op.stack == d.op.stack && e.op.sym == d.op.sym)
                    shapes.insert({d.op.iv, Owner::of_stack(d.op.stack), e.letter, d.letter});
        }
        for (const auto& sh : shapes) {
            const Term t = add_constraint(1, 2, sh.iv, sh.owner, combine(atom(1, sh.a), atom(2, sh.b)));
            for (auto& g : A_.constraint(1, 2, sh.iv, sh.owner, sh.a, sh.b))
                out.emplace_back(canon(g.state), Step{t, g.points, {}, {}, {}});
        }
        keep_viable(out, true);
        for (const auto& [st, l] : out) {
            const int g = shape_of(st);
            leaf_shape_.resize(std::max<size_t>(leaf_shape_.size(), g + 1), false);
            leaf_shape_[g] = true;
        }
        return out;
    }

    // Links the block ending at color i to the next one, drops colors that
    // stop being endpoints and renumbers the rest from 1.
    std::optional<SystemState> link(const SystemState& s, int i, std::vector<TermOp>& ops) const {
        const int j = next_of(s.q.P, i);
        auto r = A_.add_succ(s, i, j);
        if (!r) return std::nullopt;
        ops.push_back({TermOp::Kind::AddSucc, static_cast<uint8_t>(i), static_cast<uint8_t>(j)});
        const int before = prev_of(s.q.P, i);
        const bool i_inner = before > 0 && has(s.q.sd, before);
        const bool j_inner = has(s.q.sd, j);
        if (i_inner) {
            r = A_.forget(*r, i);
            if (!r) return std::nullopt;
            ops.push_back({TermOp::Kind::Forget, static_cast<uint8_t>(i), 0});
        }
        if (j_inner) {
            r = A_.forget(*r, j);
            if (!r) return std::nullopt;
            ops.push_back({TermOp::Kind::Forget, static_cast<uint8_t>(j), 0});
        }
        int want = 1;
        for (ColorSet rest = r->q.P; rest; rest &= rest - 1, ++want) {
            const int c = std::countr_zero(rest);
            if (c == want) continue;
            r = A_.rename(*r, c, want);
            if (!r) return std::nullopt;
            ops.push_back({TermOp::Kind::Rename, static_cast<uint8_t>(c), static_cast<uint8_t>(want)});
        }
        return canon(std::move(*r));
    }

    Search::Produced unary(const SystemState& s) {
        Search::Produced out;
        const auto bl = color_blocks(s.q);
        for (size_t k = 0; k + 1 < bl.size(); ++k) {
            const int i = bl[k].second;
            if (!A_.micro().eps_path(s.tgt[i], s.src[bl[k + 1].first])) continue;
            Step st;
            if (auto r = link(s, i, st.post_ops)) out.emplace_back(std::move(*r), std::move(st));
        }
        keep_viable(out);
        return out;
    }

    BlockStages stages_of(const SystemState& s) const {
        BlockStages out;
        for (const auto& [a, b] : color_blocks(s.q)) {
            out.src[out.n] = s.src[a];
            out.tgt[out.n++] = s.tgt[b];
        }
        return out;
    }

    // Depth-first merge of the two block sequences; f returns false to stop.
    template <typename F>
    void for_interleavings(const BlockStages& x, const BlockStages& y, F&& f) const {
        const int n = x.n + y.n;
        if (n > A_.K()) return;
        const BlockStages* side[2] = {&x, &y};
        Interleaving il;
        int k[2] = {0, 0};
        bool stop = false;
        auto go = [&](auto&& self, int p, int16_t prev, int prev_side) -> void {
            if (p == n) {
                if (to_final_[prev] && (prefix_ || !il.cross.empty())) stop = !f(il);
                return;
            }
            for (int sd = 0; sd < 2 && !stop; ++sd) {
                if (k[sd] == side[sd]->n) continue;
                const int16_t src = side[sd]->src[k[sd]];
                if (!reach(prev, src)) continue;
                const bool cross = p > 0 && sd != prev_side && A_.micro().eps_path(prev, src);
                if (cross) il.cross.push_back(p - 1);
                if (sd) il.mask |= 1U << p;
                const int16_t tgt = side[sd]->tgt[k[sd]++];
                self(self, p + 1, tgt, sd);
                --k[sd];
                il.mask &= ~(1U << p);
                if (cross) il.cross.pop_back();
            }
        };
        go(go, 0, A_.micro().dummy_source(), -1);
    }

    std::vector<Interleaving> interleavings(const SystemState& s1, const SystemState& s2) const {
        std::vector<Interleaving> out;
        for_interleavings(stages_of(s1), stages_of(s2), [&](const Interleaving& il) {
            out.push_back(il);
            return true;
        });
        return out;
    }

    bool is_leaf_shape(int g) const { return g < static_cast<int>(leaf_shape_.size()) && leaf_shape_[g]; }

    bool shapes_compatible(int g, int h) const {
        if (prefix_ && !is_leaf_shape(g) && !is_leaf_shape(h)) return false;
        bool any = false;
        for_interleavings(shape_stages_[g], shape_stages_[h], [&](const Interleaving&) {
            any = true;
            return false;
        });
        return any;
    }

    Search::Produced binary(const SystemState& s1, const SystemState& s2) {
        Search::Produced out;
        const auto b1 = color_blocks(s1.q), b2 = color_blocks(s2.q);
        for (const auto& il : interleavings(s1, s2)) {
            const int n = static_cast<int>(b1.size() + b2.size());
            std::vector<std::pair<int, int>> order; // (side, block index)
            int k1 = 0, k2 = 0;
            for (int p = 0; p < n; ++p) order.emplace_back((il.mask >> p) & 1U, (il.mask >> p) & 1U ? k2++ : k1++);
            auto block_of = [&](int p) { return order[p].first == 0 ? b1[order[p].second] : b2[order[p].second]; };

            // Final colors and the renames putting each side in place.
            std::map<int, int> f1, f2;
            std::vector<int> boundary_color(n); // last color of block p
            int c = 1;
            for (int p = 0; p < n; ++p) {
                auto& f = order[p].first == 0 ? f1 : f2;
                const auto [a, b] = block_of(p);
                f[a] = c++;
                if (b != a) f[b] = c++;
                boundary_color[p] = c - 1;
            }
            Step base;
            auto place = [&](const SystemState& s, const std::map<int, int>& f, std::vector<TermOp>& ops) {
                std::optional<SystemState> r = s;
                for (auto it = f.rbegin(); it != f.rend() && r; ++it) {
                    if (it->first == it->second) continue;
                    r = A_.rename(*r, it->first, it->second);
                    ops.push_back({TermOp::Kind::Rename, static_cast<uint8_t>(it->first), static_cast<uint8_t>(it->second)});
                }
                return r;
            };
            auto r1 = place(s1, f1, base.left_ops);
            auto r2 = place(s2, f2, base.right_ops);
            if (!r1 || !r2) continue;
            for (const auto& joined : A_.combine(*r1, *r2)) {
                if (prefix_) {
                    out.emplace_back(canon(joined), base);
                    continue;
                }
                for (int p : il.cross) {
                    Step st = base;
                    if (auto r = link(joined, boundary_color[p], st.post_ops)) out.emplace_back(std::move(*r), std::move(st));
                }
            }
        }
        keep_viable(out);
        return out;
    }

    // Everything but the timing data.
    int shape_of(const SystemState& s) {
        SystemState key = s;
        key.q.tsm = {};
        key.q.ac = 0;
        auto [it, fresh] = shapes_.try_emplace(std::move(key), static_cast<int>(shapes_.size()));
        if (fresh) shape_stages_.push_back(stages_of(s));
        return it->second;
    }
};

struct Rebuilt {
    Term term;
    std::vector<PointGuess> guesses; // leaf order
};

Rebuilt rebuild(const SystemSearch::Search& search, int id) {
    const auto& l = search.link(id);
    if (l.a < 0) return {l.label.leaf, l.label.guesses};
    if (l.b < 0) {
        auto child = rebuild(search, l.a);
        child.term = apply(child.term, l.label.post_ops);
        return child;
    }
    auto left = rebuild(search, l.a);
    auto right = rebuild(search, l.b);
    Rebuilt out;
    out.term = apply(combine(apply(left.term, l.label.left_ops), apply(right.term, l.label.right_ops)), l.label.post_ops);
    out.guesses = std::move(left.guesses);
    out.guesses.insert(out.guesses.end(), right.guesses.begin(), right.guesses.end());
    return out;
}

[[noreturn]] void inconsistent(const std::string& what) { throw Error(Errc::InternalInconsistency, what); }

// Clock constraints re-anchored at the first point of their reset block.
std::vector<Constraint> reset_normal_form(const Stcw& w) {
    std::map<std::string, std::set<int>> sources;
    for (const auto& c : w.constraints)
        if (c.owner.kind == Owner::Kind::Clock) sources[c.owner.clock].insert(c.src);
    std::vector<Constraint> out;
    for (auto c : w.constraints) {
        if (c.owner.kind == Owner::Kind::Clock) {
            const auto& s = sources[c.owner.clock];
            while (s.count(c.src - 1)) --c.src;
        }
        out.push_back(c);
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace

bool same_up_to_reset_order(const Stcw& a, const Stcw& b) {
    return a.labels == b.labels && reset_normal_form(a) == reset_normal_form(b);
}

void revalidate(const TimedSystem& S, const Witness& w, int K, int M) {
    if (!is_km_stt(w.term, K, M)) inconsistent("witness term is not a (K,M)-term");
    if (!accepts(w.term, K, M)) inconsistent("witness term rejected by the validity automaton");
    if (!SystemAutomaton(S, K, M).accepts(w.term)) inconsistent("witness term rejected by the system automaton");
    const auto lin = linearize(eval(w.term));
    if (!(lin.word.word == w.stcw)) inconsistent("witness word differs from the term's value");
    if (!satisfies(w.stcw, w.timestamps)) inconsistent("timestamps violate the witness word");
    const auto again = sem_stcw(S, w.run);
    if (!same_up_to_reset_order(again, w.stcw)) inconsistent("witness word is not generated by its run");
    if (!check_realization(w.stcw, w.timed_word)) inconsistent("timed word does not realize the witness");
}

Verdict check_emptiness(const TimedSystem& S0, const EmptinessOptions& opt) {
    Verdict v;
    v.searched = S0.kind == ModelKind::DTMPDA ? round_normalize(S0, S0.rounds) : S0;
    const TimedSystem& S = v.searched;
    const int X = static_cast<int>(S0.clocks.size());
    const int need = required_width(S0.kind, X, S0.stacks, S0.rounds);
    v.K = opt.K.value_or(need);
    if (v.K < need)
        throw Error(Errc::ModelError, "K=" + std::to_string(v.K) + " is below the required width " + std::to_string(need) +
                                          " (" + (S0.kind == ModelKind::TA     ? "|X|+4 for timed automata"
                                                  : S0.kind == ModelKind::TPDA ? "4|X|+6 for timed pushdown automata"
                                                                               : "max(kn+2(kn-1)|Y|, (k+2)(2|Y|+1)) for multistack systems") +
                                          ")");
    if (2 * v.K > kMaxColor) throw Error(Errc::ModelError, "K=" + std::to_string(v.K) + " exceeds the supported color range");
    const int64_t needM = S0.bound_M();
    v.M = static_cast<int>(opt.M.value_or(needM));
    if (v.M < needM) throw Error(Errc::ModelError, "M must exceed every constant (at least " + std::to_string(needM) + ")");

    SystemSearch inst(S, v.K, v.M);
    SystemSearch::Search search(inst.rules(), opt.max_states);
    const auto hit = search.run();
    v.states_explored = search.size();
    if (!hit) return v;
    v.nonempty = true;

    auto rb = rebuild(search, *hit);
    Witness w;
    w.term = rb.term;
    w.depth = term_depth(w.term);
    const auto g = eval(w.term);
    const auto lin = linearize(g);
    w.stcw = lin.word.word;
    for (int p = 0; p < w.stcw.size(); ++p) w.guesses.push_back(rb.guesses.at(lin.vertex[p]));
    for (const auto& pg : w.guesses)
        if (pg.role == PointRole::Action) w.run.push_back(pg.trans);
    auto real = realize(w.stcw);
    if (!std::holds_alternative<TimestampMap>(real)) inconsistent("witness word is unrealizable");
    w.timestamps = std::get<TimestampMap>(real);
    w.timed_word = timed_word(w.stcw, w.timestamps);
    revalidate(S, w, v.K, v.M);
    v.witness = std::move(w);
    return v;
}

namespace {

std::string op_text(const StackOp& op) {
    switch (op.kind) {
    case StackOp::Kind::Nop: return "nop";
    case StackOp::Kind::Push: return "push " + op.sym + " on " + std::to_string(op.stack);
    case StackOp::Kind::Pop: return "pop " + op.sym + " from " + std::to_string(op.stack) + " age " + op.iv.str();
    }
    return "nop";
}

// (transition, action time) for every step, the implicit first one included.
std::vector<std::pair<int, int64_t>> steps_of(const TimedSystem& S, const Witness& w) {
    std::vector<std::pair<int, int64_t>> out;
    for (int p = 0; p < static_cast<int>(w.guesses.size()); ++p) {
        const auto& g = w.guesses[p];
        const bool initial = g.trans == dummy_transition(S) && g.role == PointRole::Entry;
        if (g.role == PointRole::Action || initial) out.emplace_back(g.trans, w.timestamps.at(p));
    }
    return out;
}

std::string state_name(const TimedSystem& S, int s) {
    return s == static_cast<int>(S.states.size()) ? std::string("init") : S.states[s];
}

} // namespace

std::string witness_to_run(const TimedSystem& S, const Witness& w) {
    std::ostringstream os;
    for (const auto& [t, time] : steps_of(S, w)) {
        const auto d = transition_at(S, t);
        os << "t=" << time << "  " << state_name(S, d.from) << " --" << (d.letter.empty() ? "ε" : d.letter);
        if (t == dummy_transition(S)) {
            os << " [reset all]";
        } else {
            os << " [" << op_text(d.op);
            for (const auto& g : d.guard) os << ", " << g.clock << " in " << g.iv.str();
            if (!d.resets.empty()) {
                os << ", reset";
                for (const auto& x : d.resets) os << " " << x;
            }
            os << "]";
        }
        os << "--> " << state_name(S, d.to) << "\n";
    }
    return os.str();
}

json verdict_to_json(const TimedSystem& S, const Verdict& v) {
    json out = {{"verdict", v.nonempty ? "nonempty" : "empty"},
                {"K", v.K},
                {"M", v.M},
                {"states_explored", v.states_explored},
                {"witness", nullptr}};
    if (!v.witness) return out;
    const auto& w = *v.witness;
    json run = json::array();
    for (const auto& [t, time] : steps_of(S, w)) {
        const auto d = transition_at(S, t);
        run.push_back({{"transition", t == dummy_transition(S) ? json("init") : json(t)},
                       {"from", state_name(S, d.from)},
                       {"to", state_name(S, d.to)},
                       {"letter", d.letter},
                       {"time", time}});
    }
    json tw = json::array();
    for (const auto& l : w.timed_word) tw.push_back({{"letter", l.letter}, {"time", l.time}});
    out["witness"] = {{"term", serialize_term(w.term)},
                      {"depth", w.depth},
                      {"run", run},
                      {"stcw", stcw_to_json(w.stcw)},
                      {"timestamps", timestamps_to_json(w.timestamps)},
                      {"timed_word", tw}};
    return out;
}

} // namespace tcwta
