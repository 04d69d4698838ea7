#pragma once

#include "twsp/applications.hpp"
#include "twsp/baselines.hpp"
#include "twsp/cur.hpp"
#include "twsp/io.hpp"
#include "twsp/linalg.hpp"
#include "twsp/matrix.hpp"
#include "twsp/rng.hpp"
#include "twsp/solver.hpp"
#include "twsp/synth.hpp"
