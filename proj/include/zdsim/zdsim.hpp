#pragma once

#include "zdsim/errors.hpp"
#include "zdsim/lti_core.hpp"
#include "zdsim/zero_dynamics.hpp"
#include "zdsim/triggering.hpp"
#include "zdsim/attack_models.hpp"
#include "zdsim/plant_side.hpp"
#include "zdsim/command_center.hpp"
#include "zdsim/design_toolbox.hpp"
#include "zdsim/sim_engine.hpp"
#include "zdsim/presets.hpp"
#include "zdsim/csv.hpp"
