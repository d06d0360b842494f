// Copyright (c) tcwta contributors.
// SPDX-License-Identifier: Apache-2.0
//
// tcwta: emptiness checking and the pipeline stages behind it.
// Exit codes: 0 success, 1 negative verdict (empty, unrealizable, not
// well-timed), 2 any error.
#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "tcwta/emptiness.hpp"
#include "tcwta/generate.hpp"
#include "tcwta/split.hpp"
#include "tcwta/stt_io.hpp"

using namespace tcwta;

namespace {

constexpr int kNegative = 1;
constexpr int kInputError = 2;

std::string read_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw Error(Errc::ModelError, "cannot open '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

json read_json(const std::string& path) {
    try {
        return json::parse(read_file(path));
    } catch (const json::parse_error& e) {
        throw Error(Errc::ModelError, path + ": " + e.what());
    }
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path);
    if (!f) throw Error(Errc::ModelError, "cannot write '" + path + "'");
    f << text;
}

ModelKind kind_of(const std::string& s) { return model_kind_from_name(s); }

struct CheckArgs {
    std::string model, witness, dot;
    std::optional<int> k, m;
    size_t max_states = 2'000'000;
};

int run_check(const CheckArgs& a) {
    const auto S = system_from_json(read_json(a.model));
    EmptinessOptions opt;
    opt.K = a.k;
    opt.M = a.m;
    opt.max_states = a.max_states;
    const auto v = check_emptiness(S, opt);
    const auto& shown = v.searched;
    std::cout << (v.nonempty ? "nonempty" : "empty") << "\n";
    std::cout << "K=" << v.K << " M=" << v.M << " states_explored=" << v.states_explored << "\n";
    if (S.kind == ModelKind::DTMPDA)
        std::cout << "alternative width figure (not used): " << alternative_mpda_width(static_cast<int>(S.clocks.size()), S.stacks, S.rounds)
                  << "\n";
    if (v.witness) {
        std::cout << "witness term depth " << v.witness->depth << ", " << v.witness->stcw.size() << " points\n";
        std::cout << witness_to_run(shown, *v.witness);
        if (!a.dot.empty()) write_file(a.dot, stcw_to_dot(SplitStcw::whole(v.witness->stcw), "witness"));
    }
    if (!a.witness.empty()) write_file(a.witness, verdict_to_json(shown, v).dump(2) + "\n");
    return v.nonempty ? 0 : kNegative;
}

int run_realize(const std::string& path) {
    const auto w = stcw_from_json(read_json(path));
    const auto r = realize(w);
    if (const auto* ts = std::get_if<TimestampMap>(&r)) {
        std::cout << "realizable\n" << json{{"timestamps", timestamps_to_json(*ts)}}.dump(2) << "\n";
        return 0;
    }
    std::cout << "unrealizable\n" << unrealizable_to_json(w.word, std::get<Unrealizable>(r)).dump(2) << "\n";
    return kNegative;
}

struct DecomposeArgs {
    std::string input, kind = "ta", json_out, dot, term;
    int stacks = 1, rounds = 1;
};

int run_decompose(const DecomposeArgs& a) {
    const auto w = stcw_from_json(read_json(a.input));
    const auto kind = kind_of(a.kind);
    std::set<std::string> clocks;
    for (const auto& c : w.word.constraints)
        if (c.owner.kind == Owner::Kind::Clock) clocks.insert(c.owner.clock);
    const auto T = kind == ModelKind::TA     ? decompose_ta(w.word)
                   : kind == ModelKind::TPDA ? decompose_tpda(w.word)
                                             : decompose_mpda(w.word, a.stacks, a.rounds);
    const int K = required_width(kind, static_cast<int>(clocks.size()), a.stacks, a.rounds);
    std::cout << "width " << T.width() << " (required width " << K << " for " << clocks.size() << " clocks)\n";
    if (!a.json_out.empty()) write_file(a.json_out, split_tree_to_json(T).dump(2) + "\n");
    if (!a.dot.empty()) write_file(a.dot, split_tree_to_dot(T));
    if (!a.term.empty()) write_file(a.term, serialize_term(split_tree_to_stt(T, K)) + "\n");
    return 0;
}

int run_eval(const std::string& path, const std::string& dot) {
    const Term t = parse_term(read_file(path));
    const auto g = eval(t);
    if (!dot.empty()) write_file(dot, colored_graph_to_dot(g));
    const auto lin = linearize(g);
    json colored = json::object();
    for (const auto& [c, p] : lin.colored) colored[std::to_string(c)] = p;
    std::cout << json{{"graph", stcw_to_json(lin.word)}, {"colored", colored}}.dump(2) << "\n";
    return 0;
}

struct ValidateArgs {
    std::string input;
    std::vector<std::string> clocks;
    int stacks = 0, rounds = 1;
};

int run_validate(const ValidateArgs& a) {
    const auto w = stcw_from_json(read_json(a.input));
    const auto r = check_well_timed(w.word, {a.clocks.begin(), a.clocks.end()}, a.stacks, a.rounds);
    if (const auto* p = std::get_if<RoundPartition>(&r)) {
        std::cout << "well-timed\n" << partition_to_json(*p).dump(2) << "\n";
        return 0;
    }
    std::cout << "not well-timed: " << std::get<WellTimedViolation>(r).detail << "\n";
    return kNegative;
}

struct RandomArgs {
    std::string kind = "ta", out;
    int clocks = 1, stacks = 1, rounds = 1, steps = 8, m = 4;
    uint64_t seed = 1;
};

int run_random(const RandomArgs& a) {
    Rng rng(a.seed);
    const auto rr = random_run(rng, kind_of(a.kind), a.clocks, a.stacks, a.rounds, a.steps, a.m);
    json j = {{"system", system_to_json(rr.system)}, {"run", rr.run}, {"stcw", stcw_to_json(sem_stcw(rr.system, rr.run))}};
    if (a.out.empty())
        std::cout << j.dump(2) << "\n";
    else
        write_file(a.out, j.dump(2) + "\n");
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Emptiness of timed automata, timed pushdown and multistack systems via tree automata"};
    app.require_subcommand(1);

    CheckArgs check;
    auto* c = app.add_subcommand("check", "decide emptiness of a system");
    c->add_option("model", check.model, "system JSON")->required();
    c->add_option("--witness", check.witness, "write the verdict with witness as JSON");
    c->add_option("--dot", check.dot, "write the witness word as DOT");
    c->add_option("--k", check.k, "block bound (at least the required width)");
    c->add_option("--m", check.m, "timing bound (above every constant)");
    c->add_option("--max-states", check.max_states, "abort beyond this many search states");

    std::string realize_in;
    auto* r = app.add_subcommand("realize", "timestamps for a word with timing constraints");
    r->add_option("stcw", realize_in, "STCW JSON")->required();

    DecomposeArgs dec;
    auto* d = app.add_subcommand("decompose", "split-tree of a well-timed word");
    d->add_option("stcw", dec.input, "STCW JSON")->required();
    d->add_option("--kind", dec.kind, "ta|tpda|dtmpda")->check(CLI::IsMember({"ta", "tpda", "dtmpda"}));
    d->add_option("--stacks", dec.stacks);
    d->add_option("--rounds", dec.rounds);
    d->add_option("--json", dec.json_out, "write the tree as JSON");
    d->add_option("--dot", dec.dot, "write the tree as DOT");
    d->add_option("--term", dec.term, "write the compiled term");

    std::string eval_in, eval_dot;
    auto* e = app.add_subcommand("eval", "evaluate a term to its graph");
    e->add_option("term", eval_in, "term text file")->required();
    e->add_option("--dot", eval_dot, "write the graph as DOT");

    ValidateArgs val;
    auto* v = app.add_subcommand("validate", "well-timedness and round partition of a word");
    v->add_option("stcw", val.input, "STCW JSON")->required();
    v->add_option("--clocks", val.clocks, "clock names")->delimiter(',');
    v->add_option("--stacks", val.stacks);
    v->add_option("--rounds", val.rounds);

    RandomArgs rnd;
    auto* g = app.add_subcommand("random-run", "random straight-line system with its run and word");
    g->add_option("--kind", rnd.kind)->check(CLI::IsMember({"ta", "tpda", "dtmpda"}));
    g->add_option("--clocks", rnd.clocks);
    g->add_option("--stacks", rnd.stacks);
    g->add_option("--rounds", rnd.rounds);
    g->add_option("--steps", rnd.steps);
    g->add_option("--m", rnd.m);
    g->add_option("--seed", rnd.seed);
    g->add_option("--out", rnd.out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        const int code = app.exit(err);
        return code == 0 ? 0 : kInputError;
    }
    try {
        if (*c) return run_check(check);
        if (*r) return run_realize(realize_in);
        if (*d) return run_decompose(dec);
        if (*e) return run_eval(eval_in, eval_dot);
        if (*v) return run_validate(val);
        if (*g) return run_random(rnd);
    } catch (const Error& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kInputError;
    }
    return kInputError;
}
