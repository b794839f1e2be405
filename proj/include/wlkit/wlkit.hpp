#pragma once

#include "wlkit/error.hpp"
#include "wlkit/task_model.hpp"
#include "wlkit/pddl_parser.hpp"
#include "wlkit/json_io.hpp"
#include "wlkit/graph.hpp"
#include "wlkit/ilg.hpp"
#include "wlkit/registry.hpp"
#include "wlkit/kernels.hpp"
#include "wlkit/features.hpp"
