// Copyright (c) tcwta contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tcwta/stt.hpp"

namespace tcwta {

inline constexpr int kMaxColor = 63;
using ColorSet = uint64_t; // bit c set iff color c is present

inline bool has(ColorSet s, int c) { return (s >> c) & 1U; }
inline ColorSet bit(int c) { return ColorSet{1} << c; }
// Smallest color of s above i, or -1.
inline int next_of(ColorSet s, int i) {
    const ColorSet above = i >= kMaxColor ? 0 : (s & ~((ColorSet{2} << i) - 1));
    return above ? std::countr_zero(above) : -1;
}
// Largest color of s below i, or 0.
inline int prev_of(ColorSet s, int i) {
    const ColorSet below = s & (bit(i) - 1);
    return below ? 63 - std::countl_zero(below) : 0;
}
inline int min_of(ColorSet s) { return s ? std::countr_zero(s) : -1; }
inline int max_of(ColorSet s) { return s ? 63 - std::countl_zero(s) : -1; }

// Abstraction of a colored graph: live colors, whether each colored point is
// linked to the next colored one, timestamps modulo M, and accuracy bits.
// Values outside P are kept zero so that defaulted comparison is exact.
struct ValidityState {
    ColorSet P = 0;
    ColorSet sd = 0;
    ColorSet ac = 0;
    std::array<uint8_t, kMaxColor + 1> tsm{};

    [[nodiscard]] int size() const { return std::popcount(P); }
    [[nodiscard]] int blocks() const { return std::popcount(P & ~sd); }
    // Colors starting a block: min(P) and every successor of a color with sd false.
    [[nodiscard]] ColorSet left_endpoints() const;
    [[nodiscard]] std::string str() const;

    friend bool operator==(const ValidityState&, const ValidityState&) = default;
    friend auto operator<=>(const ValidityState&, const ValidityState&) = default;
};

struct ValidityStateHash {
    size_t operator()(const ValidityState& q) const;
};

int d(const ValidityState& q, int i, int j, int M);
int64_t D(const ValidityState& q, int i, int j, int M);
bool AC(const ValidityState& q, int i, int j);

std::vector<ValidityState> delta_atom(int i, int M);
std::optional<ValidityState> delta_rename(const ValidityState& q, int i, int j);
std::optional<ValidityState> delta_forget(const ValidityState& q, int i, int M);
std::optional<ValidityState> delta_add_succ(const ValidityState& q, int i, int j);
std::optional<ValidityState> delta_add_constraint(const ValidityState& q, int i, int j, const Interval& iv, int M);
// Throws Error{ColorOverlap} when the live sets intersect.
std::vector<ValidityState> delta_combine(const ValidityState& q1, const ValidityState& q2, int M);
bool is_accepting(const ValidityState& q);

// Adds c to every tsm value, modulo M.
ValidityState shifted(const ValidityState& q, int c, int M);
// Shift making tsm(min P) zero.
ValidityState normalized(const ValidityState& q, int M);

// Bottom-up evaluation with the block cap K, colors in 1..2K and
// constraints only over a combine of two atoms.
std::vector<ValidityState> reachable_states(const Term& t, int K, int M);
bool accepts(const Term& t, int K, int M);

} // namespace tcwta
