#pragma once

// Geometry kernel for the three simply connected constant-curvature model
// spaces: the unit sphere, Euclidean space, and the hyperboloid model of
// hyperbolic space. Provides totally geodesic subspaces, orthogonal and
// nearest-point projections, angle constructions, and a seeded verification
// harness for the perpendicularity properties relating them.

#include "spaceform/errors.hpp"

#include "spaceform/ambient.hpp"
#include "spaceform/geometry.hpp"
#include "spaceform/projections.hpp"

#include "spaceform/harness.hpp"
#include "spaceform/serialization.hpp"
