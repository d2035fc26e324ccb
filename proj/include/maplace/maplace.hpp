// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "maplace/asymptotic.hpp"
#include "maplace/baselines.hpp"
#include "maplace/channel.hpp"
#include "maplace/error.hpp"
#include "maplace/experiments.hpp"
#include "maplace/geometry.hpp"
#include "maplace/heun_solver.hpp"
#include "maplace/linalg/companion.hpp"
#include "maplace/linalg/hessenberg.hpp"
#include "maplace/linalg/tridiagonal.hpp"
#include "maplace/objective.hpp"
#include "maplace/placement.hpp"
#include "maplace/precision.hpp"
#include "maplace/rng.hpp"
#include "maplace/scenario.hpp"
