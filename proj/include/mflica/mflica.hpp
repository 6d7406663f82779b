#pragma once

#include "mflica/core.hpp"
#include "mflica/dtw.hpp"
#include "mflica/network.hpp"
#include "mflica/factions.hpp"
#include "mflica/coordination.hpp"
#include "mflica/sim.hpp"
#include "mflica/harness.hpp"
