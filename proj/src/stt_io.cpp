// Copyright (c) tcwta contributors.
// SPDX-License-Identifier: Apache-2.0
#include <cctype>
#include <sstream>

#include "tcwta/stt_io.hpp"

namespace tcwta {

namespace {

std::string interval_text(const Interval& iv) { return iv.str(); }

std::string owner_text(const Owner& o) {
    switch (o.kind) {
    case Owner::Kind::Untagged: return "";
    case Owner::Kind::Zeta: return "@zeta";
    case Owner::Kind::Clock: return "@clock:" + o.clock;
    case Owner::Kind::Stack: return "@stack:" + std::to_string(o.stack);
    }
    return "";
}

void write(const SttNode& n, std::string& out) {
    using K = SttNode::Kind;
    switch (n.kind) {
    case K::Atom:
        out += "(" + std::to_string(n.i) + "," + n.label + ")";
        return;
    case K::Combine:
        out += "(";
        write(*n.left, out);
        out += " + ";
        write(*n.right, out);
        out += ")";
        return;
    case K::AddSucc: out += "succ_" + std::to_string(n.i) + "_" + std::to_string(n.j); break;
    case K::AddConstraint:
        out += "add_" + std::to_string(n.i) + "_" + std::to_string(n.j) + interval_text(n.iv) + owner_text(n.owner);
        break;
    case K::Forget: out += "forget_" + std::to_string(n.i); break;
    case K::Rename: out += "rename_" + std::to_string(n.i) + "_" + std::to_string(n.j); break;
    }
    out += "(";
    if (n.left->kind == K::Combine) {
        write(*n.left->left, out);
        out += " + ";
        write(*n.left->right, out);
    } else {
        write(*n.left, out);
    }
    out += ")";
}

class Parser {
  public:
    explicit Parser(const std::string& s) : s_(s) {}

    Term parse_all() {
        Term t = term();
        skip_ws();
        if (pos_ != s_.size()) fail("trailing input");
        return t;
    }

  private:
    const std::string& s_;
    size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& what) const {
        int line = 1, col = 1;
        for (size_t k = 0; k < pos_ && k < s_.size(); ++k) {
            if (s_[k] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw Error(Errc::SyntaxError, std::to_string(line) + ":" + std::to_string(col) + ": " + what);
    }

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool peek(char c) {
        skip_ws();
        return pos_ < s_.size() && s_[pos_] == c;
    }

    void expect(char c) {
        skip_ws();
        if (pos_ >= s_.size()) fail(std::string("expected '") + c + "', found end of input");
        if (s_[pos_] != c) fail(std::string("expected '") + c + "', found '" + s_[pos_] + "'");
        ++pos_;
    }

    int64_t number() {
        skip_ws();
        const size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (start == pos_) fail("expected a number");
        if (pos_ - start > 12) fail("number too large");
        return std::stoll(s_.substr(start, pos_ - start));
    }

    int color() {
        const auto v = number();
        if (v < 1) fail("colors start at 1");
        return static_cast<int>(v);
    }

    std::string ident() {
        const size_t start = pos_;
        while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
        return s_.substr(start, pos_ - start);
    }

    std::string word() {
        skip_ws();
        const size_t start = pos_;
        while (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        return s_.substr(start, pos_ - start);
    }

    Interval interval() {
        expect('[');
        Interval iv;
        iv.lo = number();
        expect(',');
        skip_ws();
        if (s_.compare(pos_, 3, "inf") == 0) {
            pos_ += 3;
            iv.up = Interval::kInf;
        } else {
            iv.up = number();
        }
        expect(']');
        if (!iv.well_formed()) fail("empty interval");
        return iv;
    }

    Owner owner() {
        if (!peek('@')) return Owner::untagged();
        ++pos_;
        const auto kind = word();
        if (kind == "zeta") return Owner::zeta();
        if (kind == "clock") {
            expect(':');
            auto name = ident();
            if (name.empty()) fail("expected a clock name");
            return Owner::of_clock(name);
        }
        if (kind == "stack") {
            expect(':');
            return Owner::of_stack(static_cast<int>(number()));
        }
        fail("unknown owner '" + kind + "'");
    }

    // An operator's parentheses may directly hold a combine: op(t + u).
    Term child() {
        expect('(');
        Term t = term();
        if (peek('+')) {
            ++pos_;
            t = combine(t, term());
        }
        expect(')');
        return t;
    }

    Term term() {
        skip_ws();
        if (pos_ >= s_.size()) fail("unexpected end of input");
        if (s_[pos_] == '(') {
            ++pos_;
            skip_ws();
            if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
                const int c = color();
                expect(',');
                skip_ws();
                std::string label = ident();
                expect(')');
                return atom(c, label);
            }
            Term l = term();
            expect('+');
            Term r = term();
            expect(')');
            return combine(l, r);
        }
        const auto op = word();
        if (op == "forget") {
            expect('_');
            const int i = color();
            return forget(i, child());
        }
        if (op == "rename" || op == "succ" || op == "add" || op == "addpair") {
            expect('_');
            const int i = color();
            expect('_');
            const int j = color();
            if (op == "rename") return rename(i, j, child());
            if (op == "succ") return add_succ(i, j, child());
            const Interval iv = interval();
            Owner o = owner();
            Term c = child();
            if (op == "add") return add_constraint(i, j, iv, o, c);
            if (c->kind != SttNode::Kind::Combine || c->left->kind != SttNode::Kind::Atom ||
                c->right->kind != SttNode::Kind::Atom || c->left->i != i || c->right->i != j || !(i < j))
                fail("addpair_i_j expects ((i,a) + (j,b)) with i < j");
            return atomic_pair(i, c->left->label, j, c->right->label, iv, o);
        }
        fail(op.empty() ? "expected a term" : "unknown operator '" + op + "'");
    }
};

} // namespace

Term parse_term(const std::string& text) { return Parser(text).parse_all(); }

std::string serialize_term(const Term& t) {
    std::string out;
    write(*t, out);
    return out;
}

json term_to_json(const Term& t) {
    using K = SttNode::Kind;
    const auto& n = *t;
    switch (n.kind) {
    case K::Atom: return {{"op", "atom"}, {"color", n.i}, {"label", n.label}};
    case K::Combine: return {{"op", "combine"}, {"left", term_to_json(n.left)}, {"right", term_to_json(n.right)}};
    case K::AddSucc: return {{"op", "succ"}, {"i", n.i}, {"j", n.j}, {"child", term_to_json(n.left)}};
    case K::AddConstraint: {
        json j = interval_to_json(n.iv);
        j["op"] = "add";
        j["i"] = n.i;
        j["j"] = n.j;
        j["owner"] = owner_to_json(n.owner);
        j["child"] = term_to_json(n.left);
        return j;
    }
    case K::Forget: return {{"op", "forget"}, {"i", n.i}, {"child", term_to_json(n.left)}};
    case K::Rename: return {{"op", "rename"}, {"i", n.i}, {"j", n.j}, {"child", term_to_json(n.left)}};
    }
    return {};
}

Term term_from_json(const json& j) {
    auto bad = [](const std::string& w) -> Term { throw Error(Errc::SyntaxError, "term JSON: " + w); };
    if (!j.is_object() || !j.contains("op") || !j.at("op").is_string()) return bad("node needs an 'op'");
    const auto op = j.at("op").get<std::string>();
    auto num = [&](const char* k) {
        if (!j.contains(k) || !j.at(k).is_number_integer()) bad(std::string("missing integer '") + k + "'");
        return j.at(k).get<int>();
    };
    auto sub = [&](const char* k) {
        if (!j.contains(k)) bad(std::string("missing '") + k + "'");
        return term_from_json(j.at(k));
    };
    if (op == "atom") return atom(num("color"), j.value("label", std::string{}));
    if (op == "combine") return combine(sub("left"), sub("right"));
    if (op == "succ") return add_succ(num("i"), num("j"), sub("child"));
    if (op == "forget") return forget(num("i"), sub("child"));
    if (op == "rename") return rename(num("i"), num("j"), sub("child"));
    if (op == "add") {
        Interval iv;
        Owner o;
        try {
            iv = interval_from_json(j);
            o = j.contains("owner") ? owner_from_json(j.at("owner")) : Owner::untagged();
        } catch (const Error& e) {
            bad(e.what());
        }
        return add_constraint(num("i"), num("j"), iv, o, sub("child"));
    }
    return bad("unknown op '" + op + "'");
}

std::string colored_graph_to_dot(const ColoredGraph& g, const std::string& name) {
    std::map<int, int> color_of;
    for (const auto& [c, v] : g.chi) color_of[v] = c;
    std::ostringstream os;
    os << "digraph \"" << name << "\" {\n  rankdir=LR;\n  node [shape=circle, fontsize=10];\n";
    for (int v = 0; v < g.size(); ++v) {
        os << "  v" << v << " [label=\"" << (g.labels[v].empty() ? std::string("&epsilon;") : g.labels[v]);
        if (auto it = color_of.find(v); it != color_of.end()) os << "\\n#" << it->second;
        os << "\"" << (color_of.count(v) ? ", style=bold" : "") << "];\n";
    }
    auto succ = g.succ;
    std::sort(succ.begin(), succ.end());
    for (const auto& [u, v] : succ) os << "  v" << u << " -> v" << v << " [weight=10];\n";
    auto cons = g.constraints;
    std::sort(cons.begin(), cons.end());
    for (const auto& c : cons) {
        os << "  v" << c.src << " -> v" << c.tgt << " [constraint=false, color=blue, fontcolor=blue, label=\"" << c.iv.str();
        if (c.owner.kind != Owner::Kind::Untagged) os << " " << c.owner.str();
        os << "\"];\n";
    }
    os << "}\n";
    return os.str();
}

} // namespace tcwta
