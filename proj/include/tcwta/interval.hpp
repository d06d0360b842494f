// Copyright (c) tcwta contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <limits>
#include <string>

namespace tcwta {

// Closed interval with integer endpoints; the upper end may be unbounded.
struct Interval {
    static constexpr int64_t kInf = std::numeric_limits<int64_t>::max();

    int64_t lo = 0;
    int64_t up = 0;

    static Interval closed(int64_t lo, int64_t up) { return {lo, up}; }
    static Interval at_least(int64_t lo) { return {lo, kInf}; }
    static Interval zero() { return {0, 0}; }

    [[nodiscard]] bool bounded() const { return up != kInf; }
    [[nodiscard]] bool well_formed() const { return lo >= 0 && (up == kInf || lo <= up); }
    // Membership in the guard alphabet for bound m: lo < m and (up < m or unbounded).
    [[nodiscard]] bool within(int64_t m) const { return well_formed() && lo < m && (up == kInf || up < m); }
    template <typename T>
    [[nodiscard]] bool contains(T v) const {
        return v >= static_cast<T>(lo) && (up == kInf || v <= static_cast<T>(up));
    }
    [[nodiscard]] std::string str() const;

    friend bool operator==(const Interval&, const Interval&) = default;
    friend auto operator<=>(const Interval&, const Interval&) = default;
};

} // namespace tcwta
