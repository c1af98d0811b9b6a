#pragma once

// Umbrella header for the meshloc swarm networking and localization library.

#include "meshloc/bus.hpp"
#include "meshloc/event_queue.hpp"
#include "meshloc/localization.hpp"
#include "meshloc/log.hpp"
#include "meshloc/mesh.hpp"
#include "meshloc/metrics.hpp"
#include "meshloc/rng.hpp"
#include "meshloc/scenario.hpp"
#include "meshloc/simulator.hpp"
#include "meshloc/types.hpp"
#include "meshloc/uwb.hpp"
#include "meshloc/wire.hpp"
#include "meshloc/world.hpp"
