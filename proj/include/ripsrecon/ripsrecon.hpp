#pragma once

// Umbrella header.

#include "error.hpp"
#include "random.hpp"
#include "metric.hpp"
#include "complex.hpp"
#include "maps.hpp"
#include "homology.hpp"
#include "manifold.hpp"
#include "jung.hpp"
#include "conditions.hpp"
#include "io.hpp"
#include "experiment.hpp"
