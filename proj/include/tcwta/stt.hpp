// Copyright (c) tcwta contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "tcwta/tcw.hpp"

namespace tcwta {

struct SttNode;
using Term = std::shared_ptr<const SttNode>;

// Immutable term node. `left` is the only child of unary nodes.
struct SttNode {
    enum class Kind { Atom, AddSucc, AddConstraint, Forget, Rename, Combine };
    Kind kind = Kind::Atom;
    int i = 0; // atom color, or first color operand
    int j = 0; // second color operand
    std::string label;
    Interval iv;
    Owner owner;
    Term left;
    Term right;
};

Term atom(int color, std::string label);
Term add_succ(int i, int j, Term child);
Term add_constraint(int i, int j, Interval iv, Owner owner, Term child);
Term forget(int i, Term child);
Term rename(int i, int j, Term child);
Term combine(Term left, Term right);
// add_{i,j}((i,a) + (j,b)) spelled with renames over colors 1 and 2.
Term atomic_pair(int i, std::string a, int j, std::string b, Interval iv, Owner owner = {});

bool structurally_equal(const Term& a, const Term& b);
int term_depth(const Term& t);
int term_leaves(const Term& t);

// Graph denoted by a term: vertices in leaf order, succ edges, constraints,
// and the live color bindings.
struct ColoredGraph {
    std::vector<std::string> labels;
    std::vector<std::pair<int, int>> succ;
    std::vector<Constraint> constraints;
    std::map<int, int> chi; // color -> vertex

    [[nodiscard]] int size() const { return static_cast<int>(labels.size()); }
};

// Throws Error{ColorClash} when a combine sees overlapping colors.
ColoredGraph eval(const Term& t);

struct LinearGraph {
    SplitStcw word;          // vertices reordered along succ; no holes
    std::vector<int> vertex; // word position -> graph vertex
    std::map<int, int> colored; // color -> word position
};
// Orders a fully linked graph; throws NotLinear / BackwardConstraint.
LinearGraph linearize(const ColoredGraph& g);

std::set<int> live_colors(const Term& t);
bool is_monotonic(const Term& t);
bool is_km_stt(const Term& t, int K, int64_t M);
int max_color(const Term& t);

} // namespace tcwta
