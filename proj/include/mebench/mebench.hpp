#pragma once

#include "mebench/baselines.hpp"
#include "mebench/error.hpp"
#include "mebench/estimator.hpp"
#include "mebench/fitness_approx.hpp"
#include "mebench/frame.hpp"
#include "mebench/harmony_search.hpp"
#include "mebench/hs_bm.hpp"
#include "mebench/io.hpp"
#include "mebench/matching.hpp"
#include "mebench/metrics.hpp"
#include "mebench/parallel.hpp"
#include "mebench/random.hpp"
