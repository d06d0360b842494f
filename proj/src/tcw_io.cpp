// Copyright (c) tcwta contributors.
// SPDX-License-Identifier: Apache-2.0
#include "tcwta/tcw_io.hpp"

#include <sstream>

namespace tcwta {

namespace {

[[noreturn]] void format_error(const std::string& what) { throw Error(Errc::ModelError, what); }

int64_t as_int(const json& j, const char* what) {
    if (!j.is_number_integer()) format_error(std::string(what) + " must be an integer");
    return j.get<int64_t>();
}

std::string dot_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out;
}

} // namespace

json interval_to_json(const Interval& iv) {
    json j;
    j["lo"] = iv.lo;
    if (iv.bounded())
        j["up"] = iv.up;
    else
        j["up"] = "inf";
    return j;
}

Interval interval_from_json(const json& j, const char* lo_key, const char* up_key) {
    if (!j.contains(lo_key) || !j.contains(up_key)) format_error(std::string("interval needs '") + lo_key + "' and '" + up_key + "'");
    Interval iv;
    iv.lo = as_int(j.at(lo_key), lo_key);
    const auto& up = j.at(up_key);
    if (up.is_string()) {
        if (up.get<std::string>() != "inf") format_error("upper bound must be an integer or \"inf\"");
        iv.up = Interval::kInf;
    } else {
        iv.up = as_int(up, up_key);
    }
    if (!iv.well_formed()) format_error("malformed interval " + iv.str());
    return iv;
}

json owner_to_json(const Owner& o) {
    switch (o.kind) {
    case Owner::Kind::Untagged: return "untagged";
    case Owner::Kind::Zeta: return "zeta";
    case Owner::Kind::Clock: return json{{"clock", o.clock}};
    case Owner::Kind::Stack: return json{{"stack", o.stack}};
    }
    return "untagged";
}

Owner owner_from_json(const json& j) {
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "untagged") return Owner::untagged();
        if (s == "zeta") return Owner::zeta();
        format_error("unknown owner '" + s + "'");
    }
    if (j.is_object() && j.contains("clock") && j.at("clock").is_string()) return Owner::of_clock(j.at("clock").get<std::string>());
    if (j.is_object() && j.contains("stack")) return Owner::of_stack(static_cast<int>(as_int(j.at("stack"), "stack")));
    format_error("owner must be \"zeta\", \"untagged\", {\"clock\":name} or {\"stack\":int}");
}

json stcw_to_json(const SplitStcw& w) {
    const auto g = to_raw(w);
    json j;
    j["positions"] = json::array();
    for (const auto& p : g.positions) j["positions"].push_back({{"id", p.id}, {"label", p.label}});
    j["succ"] = json::array();
    for (const auto& [u, v] : g.succ) j["succ"].push_back({u, v});
    j["holes"] = json::array();
    for (const auto& [u, v] : g.holes) j["holes"].push_back({u, v});
    j["constraints"] = json::array();
    for (const auto& c : g.constraints) {
        json cj = interval_to_json(c.iv);
        cj["src"] = c.src;
        cj["tgt"] = c.tgt;
        cj["owner"] = owner_to_json(c.owner);
        j["constraints"].push_back(cj);
    }
    return j;
}

json stcw_to_json(const Stcw& w) { return stcw_to_json(SplitStcw::whole(w)); }

SplitStcw stcw_from_json(const json& j) {
    if (!j.is_object()) format_error("STCW must be a JSON object");
    RawGraph g;
    if (!j.contains("positions") || !j.at("positions").is_array()) format_error("missing 'positions' array");
    for (const auto& p : j.at("positions")) {
        if (!p.is_object() || !p.contains("id")) format_error("position needs an 'id'");
        RawGraph::Position pos;
        pos.id = static_cast<int>(as_int(p.at("id"), "id"));
        if (p.contains("label")) {
            if (!p.at("label").is_string()) format_error("label must be a string");
            pos.label = p.at("label").get<std::string>();
        }
        g.positions.push_back(pos);
    }
    auto read_pairs = [&](const char* key, std::vector<std::pair<int, int>>& out) {
        if (!j.contains(key)) return;
        if (!j.at(key).is_array()) format_error(std::string("'") + key + "' must be an array");
        for (const auto& e : j.at(key)) {
            if (!e.is_array() || e.size() != 2) format_error(std::string("'") + key + "' entries must be [id,id]");
            out.emplace_back(static_cast<int>(as_int(e[0], key)), static_cast<int>(as_int(e[1], key)));
        }
    };
    read_pairs("succ", g.succ);
    read_pairs("holes", g.holes);
    if (j.contains("constraints")) {
        if (!j.at("constraints").is_array()) format_error("'constraints' must be an array");
        for (const auto& c : j.at("constraints")) {
            if (!c.is_object() || !c.contains("src") || !c.contains("tgt")) format_error("constraint needs 'src' and 'tgt'");
            Constraint con;
            con.src = static_cast<int>(as_int(c.at("src"), "src"));
            con.tgt = static_cast<int>(as_int(c.at("tgt"), "tgt"));
            con.iv = interval_from_json(c);
            con.owner = c.contains("owner") ? owner_from_json(c.at("owner")) : Owner::untagged();
            g.constraints.push_back(con);
        }
    }
    return validate_tcw(g);
}

json timestamps_to_json(const TimestampMap& ts) {
    json j = json::object();
    for (size_t i = 0; i < ts.size(); ++i) j[std::to_string(i)] = ts[i];
    return j;
}

json unrealizable_to_json(const Stcw& w, const Unrealizable& u) {
    json cyc = json::array();
    for (const auto& e : u.cycle) {
        json ej{{"from", e.from}, {"to", e.to}, {"weight", e.weight}};
        switch (e.kind) {
        case DiffEdge::Kind::Order: ej["kind"] = "order"; break;
        case DiffEdge::Kind::Lower: ej["kind"] = "lower"; break;
        case DiffEdge::Kind::Upper: ej["kind"] = "upper"; break;
        }
        if (e.constraint >= 0) {
            const auto& c = w.constraints[e.constraint];
            ej["constraint"] = {{"src", c.src}, {"tgt", c.tgt}, {"interval", c.iv.str()}};
        }
        cyc.push_back(ej);
    }
    return json{{"realizable", false}, {"cycle", cyc}};
}

json partition_to_json(const RoundPartition& p) {
    json segs = json::array();
    for (const auto& s : p.segments)
        segs.push_back({{"round", s.round}, {"stack", s.stack}, {"first", s.first}, {"last", s.last}});
    return json{{"rounds", p.rounds}, {"segments", segs}};
}

std::string stcw_to_dot(const SplitStcw& w, const std::string& name) {
    std::ostringstream os;
    os << "digraph \"" << dot_escape(name) << "\" {\n  rankdir=LR;\n  node [shape=circle, fontsize=10];\n";
    for (int i = 0; i < w.size(); ++i) {
        const auto& l = w.word.labels[i];
        os << "  p" << i << " [label=\"" << (l.empty() ? std::string("&epsilon;") : dot_escape(l)) << "\\n" << i << "\"];\n";
    }
    for (int i = 0; i + 1 < w.size(); ++i) {
        os << "  p" << i << " -> p" << i + 1 << (w.hole[i] ? " [style=dashed, weight=10];\n" : " [weight=10];\n");
    }
    for (const auto& c : w.word.sorted_constraints()) {
        os << "  p" << c.src << " -> p" << c.tgt << " [constraint=false, color=blue, fontcolor=blue, label=\"" << c.iv.str();
        if (c.owner.kind != Owner::Kind::Untagged) os << " " << dot_escape(c.owner.str());
        os << "\"];\n";
    }
    os << "}\n";
    return os.str();
}

} // namespace tcwta
