#pragma once

#include "circle_maps.hpp"
#include "circloid_lab.hpp"
#include "error.hpp"
#include "example_families.hpp"
#include "geometry.hpp"
#include "grid.hpp"
#include "grid_topology.hpp"
#include "raster_io.hpp"
#include "semiconjugacy.hpp"
#include "torus_maps.hpp"
