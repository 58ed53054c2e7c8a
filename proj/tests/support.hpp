// Copyright 2026 The spinboltz Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "spinboltz/grid.hpp"
#include "spinboltz/random.hpp"

namespace spinboltz::testing {

using spinboltz::random_field;
using spinboltz::random_gauge;
using spinboltz::random_hermitian;
using spinboltz::random_interactions;
using spinboltz::random_matrix;
using spinboltz::random_physical;
using spinboltz::random_unitary;

using spinboltz::field_diff;
using spinboltz::field_max;

}  // namespace spinboltz::testing
