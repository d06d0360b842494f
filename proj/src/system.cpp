// Copyright (c) tcwta contributors.
// SPDX-License-Identifier: Apache-2.0
#include "tcwta/system.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <unordered_map>

namespace tcwta {

// ---------------------------------------------------------------- models

bool TimedSystem::is_final(int s) const { return std::find(final.begin(), final.end(), s) != final.end(); }

int TimedSystem::clock_index(const std::string& x) const {
    auto it = std::find(clocks.begin(), clocks.end(), x);
    return it == clocks.end() ? -1 : static_cast<int>(it - clocks.begin());
}

int64_t TimedSystem::max_constant() const {
    int64_t m = 0;
    auto see = [&](const Interval& iv) {
        m = std::max(m, iv.lo);
        if (iv.bounded()) m = std::max(m, iv.up);
    };
    for (const auto& d : transitions) {
        for (const auto& g : d.guard) see(g.iv);
        if (d.op.kind == StackOp::Kind::Pop) see(d.op.iv);
    }
    return m;
}

Transition transition_at(const TimedSystem& S, int t) {
    if (t >= 0 && t < static_cast<int>(S.transitions.size())) return S.transitions[t];
    if (t != dummy_transition(S)) throw Error(Errc::IllFormedRun, "transition index " + std::to_string(t) + " out of range");
    Transition d;
    d.from = static_cast<int>(S.states.size());
    d.to = S.initial;
    d.resets = S.clocks;
    return d;
}

int transition_count_with_dummy(const TimedSystem& S) { return static_cast<int>(S.transitions.size()) + 1; }

namespace {

[[noreturn]] void model_error(const std::string& what) { throw Error(Errc::ModelError, what); }

int state_ref(const std::map<std::string, int>& ids, const json& j, const char* what) {
    if (!j.is_string()) model_error(std::string(what) + " must be a state name");
    auto it = ids.find(j.get<std::string>());
    if (it == ids.end()) model_error(std::string(what) + " names unknown state '" + j.get<std::string>() + "'");
    return it->second;
}

std::vector<std::string> string_list(const json& j, const char* key) {
    std::vector<std::string> out;
    if (!j.contains(key) || j[key].is_null()) return out;
    if (!j[key].is_array()) model_error(std::string("'") + key + "' must be an array");
    for (const auto& e : j[key]) {
        if (!e.is_string()) model_error(std::string("'") + key + "' must hold strings");
        out.push_back(e.get<std::string>());
    }
    return out;
}

Interval checked_interval(const json& j, const std::string& where) {
    Interval iv;
    try {
        iv = interval_from_json(j);
    } catch (const Error& e) {
        model_error(where + ": " + e.what());
    } catch (const json::exception& e) {
        model_error(where + ": " + e.what());
    }
    if (!iv.well_formed()) model_error(where + ": malformed interval " + iv.str());
    return iv;
}

} // namespace

TimedSystem system_from_json(const json& j) {
    try {
        if (!j.is_object()) model_error("system must be a JSON object");
        TimedSystem S;
        S.kind = model_kind_from_name(j.at("kind").get<std::string>());
        S.states = string_list(j, "states");
        if (S.states.empty()) model_error("no states");
        std::map<std::string, int> ids;
        for (size_t k = 0; k < S.states.size(); ++k)
            if (!ids.emplace(S.states[k], static_cast<int>(k)).second) model_error("duplicate state '" + S.states[k] + "'");
        S.initial = state_ref(ids, j.at("initial"), "initial");
        for (const auto& f : j.at("final")) S.final.push_back(state_ref(ids, f, "final"));
        S.clocks = string_list(j, "clocks");
        for (size_t a = 0; a < S.clocks.size(); ++a) {
            if (S.clocks[a].empty()) model_error("empty clock name");
            for (size_t b = a + 1; b < S.clocks.size(); ++b)
                if (S.clocks[a] == S.clocks[b]) model_error("duplicate clock '" + S.clocks[a] + "'");
        }
        if (S.clocks.size() > 31) model_error("at most 31 clocks are supported");
        const int default_stacks = S.kind == ModelKind::TA ? 0 : 1;
        S.stacks = j.value("stacks", default_stacks);
        S.rounds = (j.contains("rounds") && !j["rounds"].is_null()) ? j["rounds"].get<int>() : 1;
        if (S.kind == ModelKind::TA && S.stacks != 0) model_error("a timed automaton has no stacks");
        if (S.kind == ModelKind::TPDA && S.stacks != 1) model_error("a timed pushdown automaton has one stack");
        if (S.kind == ModelKind::DTMPDA && S.stacks < 1) model_error("a multistack system needs at least one stack");
        if (S.rounds < 1) model_error("rounds must be positive");
        S.alphabet = string_list(j, "alphabet");
        S.stack_alphabet = string_list(j, "stack_alphabet");
        const bool check_letters = !S.alphabet.empty();
        const bool check_syms = !S.stack_alphabet.empty();
        std::set<std::string> letters(S.alphabet.begin(), S.alphabet.end());
        std::set<std::string> syms(S.stack_alphabet.begin(), S.stack_alphabet.end());

        for (const auto& jt : j.at("transitions")) {
            Transition d;
            const std::string where = "transition " + std::to_string(S.transitions.size());
            d.from = state_ref(ids, jt.at("from"), "from");
            d.to = state_ref(ids, jt.at("to"), "to");
            d.letter = jt.value("letter", std::string());
            if (!d.letter.empty() && check_letters && !letters.count(d.letter))
                model_error(where + ": letter '" + d.letter + "' not in the alphabet");
            if (!d.letter.empty() && !check_letters) letters.insert(d.letter);
            if (jt.contains("guard")) {
                for (const auto& g : jt["guard"]) {
                    Guard gd{g.at("clock").get<std::string>(), checked_interval(g, where)};
                    if (S.clock_index(gd.clock) < 0) model_error(where + ": guard on undeclared clock '" + gd.clock + "'");
                    d.guard.push_back(gd);
                }
            }
            d.resets = string_list(jt, "resets");
            for (size_t a = 0; a < d.resets.size(); ++a) {
                if (S.clock_index(d.resets[a]) < 0) model_error(where + ": reset of undeclared clock '" + d.resets[a] + "'");
                for (size_t b = a + 1; b < d.resets.size(); ++b)
                    if (d.resets[a] == d.resets[b]) model_error(where + ": clock reset twice");
            }
            const json op = jt.value("op", json("nop"));
            if (op.is_string()) {
                if (op.get<std::string>() != "nop") model_error(where + ": unknown op");
            } else if (op.contains("push") || op.contains("pop")) {
                const bool push = op.contains("push");
                const json& body = push ? op["push"] : op["pop"];
                d.op.kind = push ? StackOp::Kind::Push : StackOp::Kind::Pop;
                d.op.stack = body.value("stack", 1);
                d.op.sym = body.at("sym").get<std::string>();
                if (!push) d.op.iv = checked_interval(body, where);
                if (d.op.stack < 1 || d.op.stack > S.stacks) model_error(where + ": stack index out of range");
                if (check_syms && !syms.count(d.op.sym)) model_error(where + ": stack symbol '" + d.op.sym + "' undeclared");
            } else {
                model_error(where + ": unknown op");
            }
            S.transitions.push_back(std::move(d));
        }
        if (!check_letters) S.alphabet.assign(letters.begin(), letters.end());
        if (S.transitions.size() + S.states.size() > 2000) model_error("model too large");
        return S;
    } catch (const json::exception& e) {
        model_error(e.what());
    }
}

json system_to_json(const TimedSystem& S) {
    json tr = json::array();
    for (const auto& d : S.transitions) {
        json g = json::array();
        for (const auto& c : d.guard) {
            json e = interval_to_json(c.iv);
            e["clock"] = c.clock;
            g.push_back(e);
        }
        json op = "nop";
        if (d.op.kind == StackOp::Kind::Push) op = {{"push", {{"stack", d.op.stack}, {"sym", d.op.sym}}}};
        if (d.op.kind == StackOp::Kind::Pop) {
            json body = interval_to_json(d.op.iv);
            body["stack"] = d.op.stack;
            body["sym"] = d.op.sym;
            op = {{"pop", body}};
        }
        tr.push_back({{"from", S.states[d.from]},
                      {"to", S.states[d.to]},
                      {"letter", d.letter},
                      {"guard", g},
                      {"resets", d.resets},
                      {"op", op}});
    }
    json fin = json::array();
    for (int f : S.final) fin.push_back(S.states[f]);
    return {{"kind", model_kind_name(S.kind)},
            {"states", S.states},
            {"initial", S.states[S.initial]},
            {"final", fin},
            {"clocks", S.clocks},
            {"stacks", S.stacks},
            {"rounds", S.kind == ModelKind::DTMPDA ? json(S.rounds) : json(nullptr)},
            {"alphabet", S.alphabet},
            {"stack_alphabet", S.stack_alphabet},
            {"transitions", tr}};
}

// ---------------------------------------------------------------- micro stages

MicroTable::MicroTable(const TimedSystem& S) : S_(&S), nstates_(static_cast<int>(S.states.size())) {
    int offset = nstates_ + 1;
    for (int t = 0; t < transition_count_with_dummy(S); ++t) {
        const auto d = transition_at(S, t);
        // The initial block has no action point: its entry stage is its first post stage.
        const int h = t == dummy_transition(S) ? -1 : static_cast<int>(d.guard.size());
        const int m = std::max<int>(1, static_cast<int>(d.resets.size()));
        base_.push_back(offset);
        guards_.push_back(h);
        posts_.push_back(m);
        offset += h + 1 + m;
    }
    total_ = offset;
    if (total_ > 30000) throw Error(Errc::ModelError, "too many micro stages");
}

int16_t MicroTable::post(int trans, int k) const { return static_cast<int16_t>(base_[trans] + guards_[trans] + 1 + k); }

int16_t MicroTable::last_post(int trans) const { return post(trans, posts_[trans] - 1); }

int16_t MicroTable::encode(const MicroState& m) const {
    return m.trans < 0 ? static_cast<int16_t>(m.stage) : stage(m.trans, m.stage);
}

MicroState MicroTable::decode(int16_t id) const {
    if (id <= nstates_) return {-1, id};
    const auto it = std::upper_bound(base_.begin(), base_.end(), static_cast<int>(id));
    const int t = static_cast<int>(it - base_.begin()) - 1;
    return {t, id - base_[t]};
}

bool MicroTable::eps_path(int16_t a, int16_t b) const {
    if (a == b) return true;
    if (a <= nstates_ || b <= nstates_) return false;
    const auto ma = decode(a), mb = decode(b);
    return ma.trans == mb.trans && ma.stage > guards_[ma.trans] && ma.stage < mb.stage;
}

std::string MicroTable::name(int16_t id) const {
    if (id < 0) return "?";
    const auto m = decode(id);
    if (m.trans < 0) return m.stage == nstates_ ? std::string("init") : S_->states[m.stage];
    const int h = guards_[m.trans];
    std::string base = "t" + std::to_string(m.trans) + ".";
    if (m.stage <= h) return base + "g" + std::to_string(m.stage);
    return base + "r" + std::to_string(m.stage - h - 1);
}

std::vector<MicroPoint> micro_decompose(const TimedSystem& S, int trans, const std::vector<int>& checks) {
    const auto d = transition_at(S, trans);
    const bool initial = trans == dummy_transition(S);
    const int h = initial ? -1 : static_cast<int>(d.guard.size());
    const int m = std::max<int>(1, static_cast<int>(d.resets.size()));
    const MicroState entry{-1, d.from};
    auto stage = [&](int s) { return MicroState{trans, s}; };
    std::vector<MicroPoint> out;
    out.push_back({PointRole::Entry, 0, entry, stage(0), ""});
    for (int t = 1; t <= h; ++t) out.push_back({PointRole::Guard, t, stage(t - 1), stage(t), ""});
    if (!initial) out.push_back({PointRole::Action, 0, stage(h), stage(h + 1), d.letter});
    for (size_t k = 0; k < checks.size() && k < d.resets.size(); ++k)
        for (int c = 0; c < checks[k]; ++c)
            out.push_back({PointRole::Reset, static_cast<int>(k), stage(h + 1 + static_cast<int>(k)),
                           stage(h + 1 + static_cast<int>(k)), ""});
    out.push_back({PointRole::Exit, 0, stage(h + m), MicroState{-1, d.to}, ""});
    return out;
}

// ---------------------------------------------------------------- run semantics

AnnotatedStcw sem_annotated(const TimedSystem& S, const Run& run) {
    auto fail = [](const std::string& m) { throw Error(Errc::IllFormedRun, m); };
    const int T = static_cast<int>(S.transitions.size());
    std::vector<int> steps{dummy_transition(S)};
    for (int t : run) {
        if (t < 0 || t >= T) fail("transition index " + std::to_string(t) + " out of range");
        steps.push_back(t);
    }
    const int n = static_cast<int>(steps.size());
    std::vector<Transition> tr;
    for (int t : steps) tr.push_back(transition_at(S, t));

    int cur = S.initial;
    for (int k = 1; k < n; ++k) {
        if (tr[k].from != cur) fail("step " + std::to_string(k) + " does not start where the previous one ended");
        cur = tr[k].to;
    }
    if (!S.is_final(cur)) fail("run ends outside the final states");

    std::vector<int> match(n, -1);
    std::vector<std::vector<int>> stk(static_cast<size_t>(std::max(S.stacks, 1)) + 1);
    for (int k = 1; k < n; ++k) {
        const auto& op = tr[k].op;
        if (op.kind == StackOp::Kind::Nop) continue;
        if (op.stack < 1 || op.stack >= static_cast<int>(stk.size())) fail("stack index out of range");
        auto& st = stk[op.stack];
        if (op.kind == StackOp::Kind::Push) {
            st.push_back(k);
        } else {
            if (st.empty()) fail("pop on an empty stack at step " + std::to_string(k));
            if (tr[st.back()].op.sym != op.sym) fail("pop symbol mismatch at step " + std::to_string(k));
            match[k] = st.back();
            st.pop_back();
        }
    }
    for (const auto& st : stk)
        if (!st.empty()) fail("stack not empty at the end of the run");

    // checks[step][k]: guard points (step, conjunct) reading the k-th reset of `step`.
    std::vector<std::vector<std::vector<std::pair<int, int>>>> checks(n);
    for (int k = 0; k < n; ++k) checks[k].resize(tr[k].resets.size());
    std::vector<int> last(S.clocks.size(), 0);
    for (int k = 1; k < n; ++k) {
        for (size_t c = 0; c < tr[k].guard.size(); ++c) {
            const int x = S.clock_index(tr[k].guard[c].clock);
            if (x < 0) fail("guard on undeclared clock '" + tr[k].guard[c].clock + "'");
            const int r = last[x];
            const auto& rs = tr[r].resets;
            const auto slot = std::find(rs.begin(), rs.end(), tr[k].guard[c].clock) - rs.begin();
            checks[r][slot].push_back({k, static_cast<int>(c) + 1});
        }
        for (const auto& y : tr[k].resets) last[S.clock_index(y)] = k;
    }

    AnnotatedStcw out;
    std::vector<int> entry(n), action(n, -1), exit(n);
    std::vector<std::vector<int>> guard_pos(n);
    std::vector<std::vector<std::vector<int>>> reset_pos(n);
    for (int k = 0; k < n; ++k) {
        std::vector<int> counts;
        for (const auto& c : checks[k]) counts.push_back(static_cast<int>(c.size()));
        reset_pos[k].resize(checks[k].size());
        guard_pos[k].assign(tr[k].guard.size() + 1, -1);
        for (const auto& p : micro_decompose(S, steps[k], counts)) {
            const int pos = out.word.size();
            out.word.labels.push_back(p.label);
            out.step.push_back(k);
            out.role.push_back(p.role);
            switch (p.role) {
            case PointRole::Entry: entry[k] = pos; break;
            case PointRole::Guard: guard_pos[k][p.index] = pos; break;
            case PointRole::Action: action[k] = pos; break;
            case PointRole::Reset: reset_pos[k][p.index].push_back(pos); break;
            case PointRole::Exit: exit[k] = pos; break;
            }
        }
    }
    auto& cs = out.word.constraints;
    for (int k = 0; k < n; ++k) {
        cs.push_back({entry[k], exit[k], Interval::zero(), Owner::zeta()});
        for (size_t slot = 0; slot < checks[k].size(); ++slot) {
            const auto& targets = checks[k][slot];
            const auto& sources = reset_pos[k][slot];
            for (size_t c = 0; c < sources.size(); ++c) {
                const auto [m, conj] = targets[targets.size() - 1 - c];
                cs.push_back({sources[c], guard_pos[m][conj], tr[m].guard[conj - 1].iv, Owner::of_clock(tr[k].resets[slot])});
            }
        }
        if (match[k] >= 0) cs.push_back({action[match[k]], action[k], tr[k].op.iv, Owner::of_stack(tr[k].op.stack)});
    }
    std::sort(cs.begin(), cs.end());
    return out;
}

Stcw sem_stcw(const TimedSystem& S, const Run& run) { return sem_annotated(S, run).word; }

TimedSystem round_normalize(const TimedSystem& S, int rounds) {
    const int n = std::max(S.stacks, 1), k = std::max(rounds, 1);
    TimedSystem out = S;
    out.rounds = k;
    out.states.clear();
    out.final.clear();
    out.transitions.clear();
    auto id = [&](int s, int i, int j) { return (s * k + (i - 1)) * n + (j - 1); };
    for (size_t s = 0; s < S.states.size(); ++s)
        for (int i = 1; i <= k; ++i)
            for (int j = 1; j <= n; ++j) {
                out.states.push_back(S.states[s] + "@" + std::to_string(i) + "." + std::to_string(j));
                if (S.is_final(static_cast<int>(s))) out.final.push_back(id(static_cast<int>(s), i, j));
            }
    out.initial = id(S.initial, 1, 1);
    for (const auto& d : S.transitions) {
        for (int i = 1; i <= k; ++i) {
            for (int j = 1; j <= n; ++j) {
                int ni = i, nj = j;
                if (d.op.kind != StackOp::Kind::Nop) {
                    const int h = d.op.stack;
                    if (h < j) {
                        if (i == k) continue;
                        ni = i + 1;
                    }
                    nj = h;
                }
                Transition e = d;
                e.from = id(d.from, i, j);
                e.to = id(d.to, ni, nj);
                out.transitions.push_back(std::move(e));
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------- product automaton

namespace {

template <typename Pair>
void tidy(std::vector<Pair>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

void tidy_rgc(std::vector<ClockPair>& v) {
    std::map<std::pair<int, int>, ClockSet> merged;
    for (const auto& p : v) merged[{p.i, p.j}] |= p.clocks;
    v.clear();
    for (const auto& [ij, m] : merged)
        if (m) v.push_back({static_cast<uint8_t>(ij.first), static_cast<uint8_t>(ij.second), m});
}

int block_start(const ValidityState& q, int i) {
    for (int p = prev_of(q.P, i); p > 0 && has(q.sd, p); p = prev_of(q.P, p)) i = p;
    return i;
}

} // namespace

std::string SystemState::str() const {
    std::string s = q.str() + " st{";
    for (ColorSet rest = q.P; rest; rest &= rest - 1) {
        const int c = std::countr_zero(rest);
        s += " " + std::to_string(c) + ":" + std::to_string(src[c]) + ">" + std::to_string(tgt[c]);
        if (clr[c]) s += "/" + std::to_string(clr[c]);
    }
    s += " } rgc{";
    for (const auto& p : rgc) s += " (" + std::to_string(p.i) + "," + std::to_string(p.j) + "):" + std::to_string(p.clocks);
    s += " } pp{";
    for (const auto& p : pp) s += " " + std::to_string(p.stack) + ":(" + std::to_string(p.i) + "," + std::to_string(p.j) + ")";
    return s + " }";
}

size_t SystemStateHash::operator()(const SystemState& s) const {
    size_t h = ValidityStateHash{}(s.q);
    for (ColorSet rest = s.q.P; rest; rest &= rest - 1) {
        const int c = std::countr_zero(rest);
        h = h * 1000003U + static_cast<uint16_t>(s.src[c]);
        h = h * 1000003U + static_cast<uint16_t>(s.tgt[c]);
        h = h * 1000003U + s.clr[c];
    }
    for (const auto& p : s.rgc) h = h * 31U + (static_cast<size_t>(p.i) << 40 | static_cast<size_t>(p.j) << 32 | p.clocks);
    for (const auto& p : s.pp) h = h * 31U + (static_cast<size_t>(p.stack) << 16 | p.i << 8 | p.j);
    return h ^ (std::hash<uint64_t>{}(s.spans) * 7);
}

SystemAutomaton::SystemAutomaton(const TimedSystem& S, int K, int M) : S_(S), mt_(S), K_(K), M_(M) {
    if (M < 1) throw Error(Errc::ModelError, "M must be positive");
    all_clocks_ = S.clocks.empty() ? 0 : static_cast<ClockSet>((uint64_t{1} << S.clocks.size()) - 1);
}

ClockSet SystemAutomaton::reset_mask(const Transition& d) const {
    ClockSet m = 0;
    for (const auto& x : d.resets) m |= ClockSet{1} << S_.clock_index(x);
    return m;
}

SystemState SystemAutomaton::clean(SystemState s) const {
    tidy_rgc(s.rgc);
    tidy(s.pp);
    return s;
}

std::vector<Guessed<SystemState>> SystemAutomaton::atom(int i, const std::string& a) const {
    std::vector<Guessed<SystemState>> out;
    const auto base = delta_atom(i, M_).front();
    for (int t = 0; t < static_cast<int>(S_.transitions.size()); ++t) {
        const auto& d = S_.transitions[t];
        if (d.op.kind != StackOp::Kind::Nop || d.letter != a) continue;
        SystemState s;
        s.q = base;
        s.src[i] = mt_.stage(t, static_cast<int>(d.guard.size()));
        s.tgt[i] = mt_.post(t, 0);
        s.clr[i] = reset_mask(d);
        out.push_back({s, {{t, PointRole::Action}}});
    }
    return out;
}

std::vector<Guessed<SystemState>> SystemAutomaton::constraint(int i, int j, const Interval& iv, const Owner& owner,
                                                              const std::string& a, const std::string& b) const {
    std::vector<Guessed<SystemState>> out;
    if (!(i < j) || !iv.within(M_)) return out;
    std::vector<ValidityState> qs;
    const auto qi = delta_atom(i, M_).front(), qj = delta_atom(j, M_).front();
    for (int c = 0; c < M_; ++c)
        for (const auto& q : delta_combine(qi, shifted(qj, c, M_), M_))
            if (auto r = delta_add_constraint(q, i, j, iv, M_)) qs.push_back(normalized(*r, M_));
    tidy(qs);
    if (qs.empty()) return out;

    using OK = Owner::Kind;
    const bool any = owner.kind == OK::Untagged;
    std::vector<Guessed<SystemState>> shapes;
    const int T = transition_count_with_dummy(S_);
    auto blank = [] { return SystemState{}; };

    if ((any || owner.kind == OK::Clock) && a.empty() && b.empty()) {
        for (int t1 = 0; t1 < T; ++t1) {
            const auto d1 = transition_at(S_, t1);
            for (size_t k = 0; k < d1.resets.size(); ++k) {
                const auto& x = d1.resets[k];
                if (!any && x != owner.clock) continue;
                for (int t2 = 0; t2 + 1 < T; ++t2) {
                    const auto& d2 = S_.transitions[t2];
                    for (size_t c = 0; c < d2.guard.size(); ++c) {
                        if (d2.guard[c].clock != x || d2.guard[c].iv != iv) continue;
                        auto s = blank();
                        s.src[i] = s.tgt[i] = mt_.post(t1, static_cast<int>(k));
                        s.src[j] = mt_.stage(t2, static_cast<int>(c));
                        s.tgt[j] = mt_.stage(t2, static_cast<int>(c) + 1);
                        s.rgc = {{static_cast<uint8_t>(i), static_cast<uint8_t>(j), ClockSet{1} << S_.clock_index(x)}};
                        shapes.push_back({s, {{t1, PointRole::Reset}, {t2, PointRole::Guard}}});
                    }
                }
            }
        }
    }
    if ((any || owner.kind == OK::Zeta) && iv == Interval::zero() && a.empty() && b.empty()) {
        for (int t = 0; t < T; ++t) {
            const auto d = transition_at(S_, t);
            auto s = blank();
            s.src[i] = t + 1 == T ? mt_.dummy_source() : mt_.state(d.from);
            s.tgt[i] = mt_.stage(t, 0);
            s.src[j] = mt_.last_post(t);
            s.tgt[j] = mt_.state(d.to);
            shapes.push_back({s, {{t, PointRole::Entry}, {t, PointRole::Exit}}});
        }
    }
    if (any || owner.kind == OK::Stack) {
        for (int t1 = 0; t1 + 1 < T; ++t1) {
            const auto& d1 = S_.transitions[t1];
            if (d1.op.kind != StackOp::Kind::Push || d1.letter != a) continue;
            if (!any && d1.op.stack != owner.stack) continue;
            for (int t2 = 0; t2 + 1 < T; ++t2) {
                const auto& d2 = S_.transitions[t2];
                if (d2.op.kind != StackOp::Kind::Pop || d2.letter != b) continue;
                if (d2.op.stack != d1.op.stack || d2.op.sym != d1.op.sym || d2.op.iv != iv) continue;
                auto s = blank();
                s.src[i] = mt_.stage(t1, static_cast<int>(d1.guard.size()));
                s.tgt[i] = mt_.post(t1, 0);
                s.src[j] = mt_.stage(t2, static_cast<int>(d2.guard.size()));
                s.tgt[j] = mt_.post(t2, 0);
                s.clr[i] = reset_mask(d1);
                s.clr[j] = reset_mask(d2);
                s.pp = {{static_cast<uint8_t>(d1.op.stack), static_cast<uint8_t>(i), static_cast<uint8_t>(j)}};
                shapes.push_back({s, {{t1, PointRole::Action}, {t2, PointRole::Action}}});
            }
        }
    }
    for (const auto& q : qs) {
        for (auto g : shapes) {
            g.state.q = q;
            out.push_back(std::move(g));
        }
    }
    return out;
}

std::optional<SystemState> SystemAutomaton::add_succ(const SystemState& s, int i, int j) const {
    auto q = delta_add_succ(s.q, i, j);
    if (!q || !mt_.eps_path(s.tgt[i], s.src[j])) return std::nullopt;
    SystemState r = s;
    r.q = *q;
    const int k = block_start(s.q, i);
    r.clr[k] |= r.clr[j];
    r.clr[j] = 0;
    const bool exits = s.tgt[i] >= 0 && mt_.decode(s.tgt[i]).trans < 0;
    if (has(s.spans, j) || exits) r.spans |= bit(k);
    r.spans &= ~bit(j);
    auto re = [&](uint8_t c) { return c == j ? static_cast<uint8_t>(k) : c; };
    std::vector<ClockPair> rgc;
    for (const auto& p : r.rgc) {
        ClockPair n{re(p.i), re(p.j), p.clocks};
        if (n.i != n.j) rgc.push_back(n);
    }
    std::vector<StackPair> pp;
    for (const auto& p : r.pp) {
        StackPair n{p.stack, re(p.i), re(p.j)};
        if (n.i != n.j) pp.push_back(n);
    }
    r.rgc = std::move(rgc);
    r.pp = std::move(pp);
    return clean(std::move(r));
}

std::optional<SystemState> SystemAutomaton::forget(const SystemState& s, int i) const {
    auto q = delta_forget(s.q, i, M_);
    if (!q) return std::nullopt;
    SystemState r = s;
    r.q = normalized(*q, M_);
    r.src[i] = r.tgt[i] = 0;
    r.clr[i] = 0;
    return r;
}

std::optional<SystemState> SystemAutomaton::rename(const SystemState& s, int i, int j) const {
    auto q = delta_rename(s.q, i, j);
    if (!q) return std::nullopt;
    if (i == j) return s;
    SystemState r = s;
    r.q = normalized(*q, M_);
    r.src[j] = s.src[i];
    r.tgt[j] = s.tgt[i];
    r.clr[j] = s.clr[i];
    r.src[i] = r.tgt[i] = 0;
    r.clr[i] = 0;
    r.spans = (s.spans & ~bit(i)) | (has(s.spans, i) ? bit(j) : 0);
    auto re = [&](uint8_t c) { return c == i ? static_cast<uint8_t>(j) : c; };
    for (auto& p : r.rgc) p = {re(p.i), re(p.j), p.clocks};
    for (auto& p : r.pp) p = {p.stack, re(p.i), re(p.j)};
    return clean(std::move(r));
}

std::vector<SystemState> SystemAutomaton::combine(const SystemState& s1, const SystemState& s2) const {
    if (s1.q.P & s2.q.P) throw Error(Errc::ColorOverlap, "combine of overlapping color sets");
    // A block resetting x may not sit between a reset of x and its check.
    auto inserts_reset = [](const SystemState& a, const SystemState& b) {
        const ColorSet left = b.q.left_endpoints();
        for (const auto& p : a.rgc)
            for (ColorSet rest = left; rest; rest &= rest - 1) {
                const int k = std::countr_zero(rest);
                if (p.i < k && k < p.j && (b.clr[k] & p.clocks)) return true;
            }
        return false;
    };
    if (inserts_reset(s1, s2) || inserts_reset(s2, s1)) return {};
    for (const auto& a : s1.pp)
        for (const auto& b : s2.pp)
            if (a.stack == b.stack && ((a.i < b.i && b.i < a.j && a.j < b.j) || (b.i < a.i && a.i < b.j && b.j < a.j)))
                return {};

    SystemState base;
    for (int c = 0; c <= kMaxColor; ++c) {
        const SystemState& from = has(s1.q.P, c) ? s1 : s2;
        base.src[c] = from.src[c];
        base.tgt[c] = from.tgt[c];
        base.clr[c] = from.clr[c];
    }
    base.rgc = s1.rgc;
    base.rgc.insert(base.rgc.end(), s2.rgc.begin(), s2.rgc.end());
    base.pp = s1.pp;
    base.pp.insert(base.pp.end(), s2.pp.begin(), s2.pp.end());
    base.spans = s1.spans | s2.spans;
    base = clean(std::move(base));

    std::vector<SystemState> out;
    for (int c = 0; c < M_; ++c) {
        for (const auto& q : delta_combine(s1.q, shifted(s2.q, c, M_), M_)) {
            SystemState r = base;
            r.q = normalized(q, M_);
            out.push_back(std::move(r));
        }
    }
    tidy(out);
    return out;
}

bool SystemAutomaton::accepting(const SystemState& s) const {
    if (!is_accepting(s.q) || s.q.size() != 2) return false;
    const int i = min_of(s.q.P), j = max_of(s.q.P);
    if (s.src[i] != mt_.dummy_source()) return false;
    const auto end = mt_.decode(s.tgt[j]);
    return s.tgt[j] >= 0 && end.trans < 0 && S_.is_final(end.stage);
}

namespace {

struct SysEvaluator {
    const SystemAutomaton& A;
    std::unordered_map<const SttNode*, std::vector<SystemState>> memo;

    const std::vector<SystemState>& eval(const Term& t) {
        if (auto it = memo.find(t.get()); it != memo.end()) return it->second;
        auto out = compute(*t);
        std::erase_if(out, [&](const SystemState& s) { return s.q.blocks() > A.K(); });
        tidy(out);
        return memo.emplace(t.get(), std::move(out)).first->second;
    }

    std::vector<SystemState> compute(const SttNode& n) {
        using Kd = SttNode::Kind;
        auto color_ok = [&](int c) { return c >= 1 && c <= 2 * A.K() && c <= kMaxColor; };
        std::vector<SystemState> out;
        switch (n.kind) {
        case Kd::Atom:
            if (color_ok(n.i))
                for (auto& g : A.atom(n.i, n.label)) out.push_back(std::move(g.state));
            return out;
        case Kd::Rename:
            if (!color_ok(n.j)) return out;
            for (const auto& s : eval(n.left))
                if (auto r = A.rename(s, n.i, n.j)) out.push_back(std::move(*r));
            return out;
        case Kd::Forget:
            for (const auto& s : eval(n.left))
                if (auto r = A.forget(s, n.i)) out.push_back(std::move(*r));
            return out;
        case Kd::AddSucc:
            for (const auto& s : eval(n.left))
                if (auto r = A.add_succ(s, n.i, n.j)) out.push_back(std::move(*r));
            return out;
        case Kd::AddConstraint: {
            const auto& c = *n.left;
            if (c.kind != Kd::Combine || c.left->kind != Kd::Atom || c.right->kind != Kd::Atom) return out;
            const auto& l = *c.left;
            const auto& r = *c.right;
            if (!color_ok(l.i) || !color_ok(r.i)) return out;
            const std::string* a = l.i == n.i ? &l.label : (r.i == n.i ? &r.label : nullptr);
            const std::string* b = l.i == n.j ? &l.label : (r.i == n.j ? &r.label : nullptr);
            if (!a || !b || l.i == r.i) return out;
            for (auto& g : A.constraint(n.i, n.j, n.iv, n.owner, *a, *b)) out.push_back(std::move(g.state));
            return out;
        }
        case Kd::Combine: {
            const auto& l = eval(n.left);
            const auto& r = eval(n.right);
            for (const auto& s1 : l)
                for (const auto& s2 : r) {
                    if (s1.q.P & s2.q.P) return {};
                    for (auto& s : A.combine(s1, s2)) out.push_back(std::move(s));
                }
            return out;
        }
        }
        return out;
    }
};

} // namespace

std::vector<SystemState> SystemAutomaton::reachable(const Term& t) const {
    SysEvaluator ev{*this, {}};
    return ev.eval(t);
}

bool SystemAutomaton::accepts(const Term& t) const {
    const auto states = reachable(t);
    return std::any_of(states.begin(), states.end(), [&](const SystemState& s) { return accepting(s); });
}

} // namespace tcwta
