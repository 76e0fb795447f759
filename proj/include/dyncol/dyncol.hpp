#pragma once

#include "types.hpp"
#include "rng.hpp"
#include "work_meter.hpp"
#include "scratch.hpp"
#include "graph_core.hpp"
#include "epochs.hpp"
#include "engine.hpp"
#include "baseline.hpp"
#include "stream.hpp"
#include "report.hpp"
#include "runner.hpp"
