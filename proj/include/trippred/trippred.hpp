#pragma once

// Neighbor-based trip prediction from origin-destination trip histories:
// validation-driven neighbor selection, frequency-weighted medoid
// prediction, and the experiment harness around them.

#include "trippred/domain.hpp"
#include "trippred/errors.hpp"
#include "trippred/eval.hpp"
#include "trippred/ingest.hpp"
#include "trippred/metrics.hpp"
#include "trippred/nmf.hpp"
#include "trippred/predict.hpp"
#include "trippred/selection.hpp"
#include "trippred/svg.hpp"
#include "trippred/synth.hpp"
