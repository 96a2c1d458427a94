#pragma once

// Umbrella header.

#include "parahoric/errors.hpp"
#include "parahoric/field.hpp"
#include "parahoric/cyclotomic.hpp"
#include "parahoric/combinatorics.hpp"
#include "parahoric/glq_group.hpp"
#include "parahoric/character_table.hpp"
#include "parahoric/harish_chandra.hpp"
#include "parahoric/orders.hpp"
#include "parahoric/intersection.hpp"
#include "parahoric/sweep.hpp"
#include "parahoric/building.hpp"
#include "parahoric/chains.hpp"
#include "parahoric/orbit.hpp"
#include "parahoric/report.hpp"
#include "parahoric/cli.hpp"
