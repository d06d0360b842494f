// Copyright (c) tcwta contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "tcwta/stt.hpp"
#include "tcwta/tcw_io.hpp"

namespace tcwta {

// Text syntax (whitespace is free between tokens):
//   (3,a)                      atom; (3,) is a silent atom
//   (t + u)                    combine
//   succ_i_j(t)                successor edge; op(t + u) abbreviates op((t + u))
//   add_i_j[lo,up]@owner(t)    constraint; up may be inf; @owner optional
//                              (@zeta, @clock:x, @stack:2)
//   forget_i(t)  rename_i_j(t)
//   addpair_i_j[lo,up]@owner((i,a) + (j,b))
//                              abbreviation expanding to renames over colors 1,2
// Throws Error{SyntaxError} with line:column.
Term parse_term(const std::string& text);
std::string serialize_term(const Term& t);

json term_to_json(const Term& t);
Term term_from_json(const json& j);

// Evaluated graph as DOT; colored vertices show their color.
std::string colored_graph_to_dot(const ColoredGraph& g, const std::string& name = "term");

} // namespace tcwta
