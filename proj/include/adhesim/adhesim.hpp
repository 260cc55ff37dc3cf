// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "adhesim/assembly.hpp"
#include "adhesim/config.hpp"
#include "adhesim/constraints.hpp"
#include "adhesim/diagnostics.hpp"
#include "adhesim/errors.hpp"
#include "adhesim/mesh.hpp"
#include "adhesim/model.hpp"
#include "adhesim/monotone.hpp"
#include "adhesim/numerics.hpp"
#include "adhesim/runner.hpp"
#include "adhesim/solver.hpp"
#include "adhesim/transient.hpp"
