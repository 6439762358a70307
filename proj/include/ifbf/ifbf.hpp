#pragma once

// Monotone-operator splitting by the inertial forward-backward-forward
// scheme: plain inclusions, their primal-dual product-space extension for
// compositely structured problems, and the proximal solver for the matching
// convex optimization pairs.

#include "convex.hpp"
#include "errors.hpp"
#include "fbf.hpp"
#include "hilbert.hpp"
#include "matrix.hpp"
#include "operators.hpp"
#include "primal_dual.hpp"
#include "zoo.hpp"
