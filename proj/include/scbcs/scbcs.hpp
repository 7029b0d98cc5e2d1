// Umbrella header.
#pragma once

#include "scbcs/errors.hpp"
#include "scbcs/geometry.hpp"
#include "scbcs/hadamard.hpp"
#include "scbcs/image.hpp"
#include "scbcs/measurement_io.hpp"
#include "scbcs/metrics.hpp"
#include "scbcs/pipeline.hpp"
#include "scbcs/preview.hpp"
#include "scbcs/rng.hpp"
#include "scbcs/sensing.hpp"
#include "scbcs/solver.hpp"
