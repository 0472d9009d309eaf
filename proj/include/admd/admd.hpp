#pragma once

// Umbrella header for the ADMD small-target detection library.

#include "admd/bench.hpp"
#include "admd/detectors.hpp"
#include "admd/filters.hpp"
#include "admd/ground_truth.hpp"
#include "admd/image.hpp"
#include "admd/image_io.hpp"
#include "admd/json_io.hpp"
#include "admd/metrics.hpp"
#include "admd/parallel.hpp"
#include "admd/synth.hpp"
