#pragma once

#include "perc/ball.hpp"
#include "perc/bounds.hpp"
#include "perc/coverage.hpp"
#include "perc/errors.hpp"
#include "perc/estimate.hpp"
#include "perc/graph_model.hpp"
#include "perc/io.hpp"
#include "perc/net.hpp"
#include "perc/percolation.hpp"
#include "perc/radius_law.hpp"
#include "perc/recursion.hpp"
#include "perc/sampler.hpp"
#include "perc/vertex.hpp"
