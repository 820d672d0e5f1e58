// Copyright 2026 The hewflow Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>

#include "hewflow/common/random.h"
#include "hewflow/sim/sim.h"

namespace hewflow::sim {

/// Draws the request type from the mix and fills in its cost fields.
Task make_task(const WorkloadSpec& spec, uint64_t id, double arrival, Prng& prng);

}  // namespace hewflow::sim
