// Copyright (c) tcwta contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "tcwta/stt.hpp"
#include "tcwta/tcw_io.hpp"

namespace tcwta {

enum class ModelKind { TA, TPDA, DTMPDA };

const char* model_kind_name(ModelKind k);
ModelKind model_kind_from_name(const std::string& s); // throws ModelError

struct SplitNode {
    enum class Kind { Leaf, Unary, Binary };
    Kind kind = Kind::Leaf;
    SplitStcw label;
    int cut = -1;   // Unary: root position p whose edge (p, p+1) the child lacks
    int left = -1;  // Unary: the only child
    int right = -1; // Binary only
};

// Arena-backed split-tree. Labels keep root positions in `origin`.
struct SplitTree {
    std::vector<SplitNode> nodes;
    int root = -1;

    [[nodiscard]] int width() const;
    [[nodiscard]] const SplitNode& at(int id) const { return nodes.at(static_cast<size_t>(id)); }
};

// Each throws Error{NotWellTimed} when the word is not simple or not
// well-timed for the clocks named on its edges.
SplitTree decompose_ta(const Stcw& w);
SplitTree decompose_tpda(const Stcw& w);
// Also throws Error{TooManyRounds}. One stack delegates to decompose_tpda.
SplitTree decompose_mpda(const Stcw& w, int stacks, int rounds);

// Throws Error{WidthExceeded} when width(T) > K.
Term split_tree_to_stt(const SplitTree& T, int K);

// |X| counts the declared clocks, without the auxiliary one.
int required_width(ModelKind kind, int clocks, int stacks = 1, int rounds = 1);
// The alternative multistack figure (4nk+4)(|X|+2); reported, never enforced.
int alternative_mpda_width(int clocks, int stacks, int rounds);

json split_tree_to_json(const SplitTree& T);
std::string split_tree_to_dot(const SplitTree& T, const std::string& name = "split");

} // namespace tcwta
