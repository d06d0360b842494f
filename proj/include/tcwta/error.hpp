// Copyright (c) tcwta contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace tcwta {

enum class Errc {
    NotLinear,
    BackwardConstraint,
    LabelMismatch,
    ColorClash,
    ColorOverlap,
    SyntaxError,
    NotWellTimed,
    TooManyRounds,
    WidthExceeded,
    IllFormedRun,
    ModelError,
    InternalInconsistency,
    ResourceLimit,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
  public:
    Error(Errc code, const std::string& what) : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
    [[nodiscard]] Errc code() const { return code_; }

  private:
    Errc code_;
};

} // namespace tcwta
