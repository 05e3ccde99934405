#pragma once

#include "modnod/continuation.hpp"
#include "modnod/dynamics.hpp"
#include "modnod/errors.hpp"
#include "modnod/model.hpp"
#include "modnod/network.hpp"
#include "modnod/reduction.hpp"
#include "modnod/saturation.hpp"
#include "modnod/scenarios.hpp"
#include "modnod/spectral.hpp"
