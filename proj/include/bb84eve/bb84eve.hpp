#pragma once

#include "analysis.hpp"
#include "bases.hpp"
#include "bounds.hpp"
#include "constants.hpp"
#include "hilbert.hpp"
#include "measurement.hpp"
#include "optimizer.hpp"
#include "povm.hpp"
#include "probe.hpp"
#include "rng.hpp"
#include "simulate.hpp"
#include "strategy_io.hpp"
#include "symmetry.hpp"
#include "verify.hpp"
