#pragma once

#include "jigsaw/connectivity.hpp"
#include "jigsaw/csv_io.hpp"
#include "jigsaw/engine.hpp"
#include "jigsaw/errors.hpp"
#include "jigsaw/grid.hpp"
#include "jigsaw/metrics.hpp"
#include "jigsaw/oracle.hpp"
#include "jigsaw/sampling.hpp"
#include "jigsaw/sweep.hpp"
#include "jigsaw/union_find.hpp"
