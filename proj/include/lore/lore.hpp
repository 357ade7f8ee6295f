#pragma once

#include "lore/active_set.hpp"
#include "lore/decode.hpp"
#include "lore/dynamics.hpp"
#include "lore/edge_list_io.hpp"
#include "lore/error_bound.hpp"
#include "lore/errors.hpp"
#include "lore/generators.hpp"
#include "lore/graph.hpp"
#include "lore/harness.hpp"
#include "lore/io.hpp"
#include "lore/recall.hpp"
#include "lore/rng.hpp"
#include "lore/routing.hpp"
#include "lore/spectral.hpp"
#include "lore/state.hpp"
#include "lore/stats.hpp"
