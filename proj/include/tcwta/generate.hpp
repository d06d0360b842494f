// Copyright (c) tcwta contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <random>

#include "tcwta/stt.hpp"
#include "tcwta/system.hpp"

namespace tcwta {

using Rng = std::mt19937_64;

// Random monotonic term with colors in 1..2K, intervals in I(M) and at most
// `max_leaves` atoms. Biased toward closing holes and forgetting inner colors
// so that a fair share of outputs denote whole words.
Term random_monotone_term(Rng& rng, int K, int M, int max_leaves);

// A straight-line system s0 -> s1 -> ... together with its only run. Guards,
// resets and stack operations are random. Stack operations come in `rounds`
// sweeps over the stacks in increasing order, and every stack is empty at the
// end, so sem_stcw accepts the run. Timing constants are below M.
struct RandomRun {
    TimedSystem system;
    Run run;
};
RandomRun random_run(Rng& rng, ModelKind kind, int clocks, int stacks, int rounds, int max_steps, int M);

} // namespace tcwta
