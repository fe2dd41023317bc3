#pragma once

// Umbrella header: the whole walk-engineering library.

#include "coin.hpp"
#include "common.hpp"
#include "lattice.hpp"
#include "measure.hpp"
#include "optimize.hpp"
#include "phasespace.hpp"
#include "photonic.hpp"
#include "report.hpp"
#include "rng.hpp"
#include "state.hpp"
#include "targets.hpp"
#include "version.hpp"
#include "walk.hpp"
