#pragma once

#include "mrdm/error.hpp"
#include "mrdm/frame_codec.hpp"
#include "mrdm/mra_core.hpp"
#include "mrdm/plan_json.hpp"
#include "mrdm/rate_plan.hpp"
#include "mrdm/signal_io.hpp"
#include "mrdm/spectrum.hpp"
#include "mrdm/wavelet_bank.hpp"
