#pragma once

#include "vbp/bench.hpp"
#include "vbp/ground.hpp"
#include "vbp/heuristics.hpp"
#include "vbp/kitchen.hpp"
#include "vbp/model.hpp"
#include "vbp/parser.hpp"
#include "vbp/planner.hpp"
#include "vbp/search.hpp"
#include "vbp/sexpr.hpp"
