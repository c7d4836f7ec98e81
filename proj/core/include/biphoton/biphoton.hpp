#pragma once

#include "biphoton/counting.hpp"
#include "biphoton/errors.hpp"
#include "biphoton/polarimetry.hpp"
#include "biphoton/polarization_state.hpp"
#include "biphoton/spectral_model.hpp"
#include "biphoton/units.hpp"
