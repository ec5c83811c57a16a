#pragma once

// Umbrella header: exact and numerical integration over simplices, cubature
// rules, and volumes of perspective vs naive relaxations.

#include "simplexvol/cubature.hpp"
#include "simplexvol/exact_integration.hpp"
#include "simplexvol/function_spec.hpp"
#include "simplexvol/gauss_jacobi.hpp"
#include "simplexvol/monte_carlo.hpp"
#include "simplexvol/polynomial.hpp"
#include "simplexvol/relaxations.hpp"
#include "simplexvol/sampling.hpp"
#include "simplexvol/series.hpp"
#include "simplexvol/simplex.hpp"
