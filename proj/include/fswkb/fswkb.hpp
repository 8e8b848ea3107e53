#pragma once

// Numerical toolkit for the 1-D fractional Schrodinger equation
// i u_t + (-Lap)^s u = 0: WKB quasi-solutions along rays, norm-conserving
// spectral and finite element Crank-Nicolson solvers, bicharacteristic rays,
// and geometric-control diagnostics.

#include "fswkb/diagnostics.hpp"
#include "fswkb/errors.hpp"
#include "fswkb/experiments.hpp"
#include "fswkb/fft.hpp"
#include "fswkb/frac_core.hpp"
#include "fswkb/geometric_control.hpp"
#include "fswkb/grid.hpp"
#include "fswkb/io.hpp"
#include "fswkb/quadrature.hpp"
#include "fswkb/rays.hpp"
#include "fswkb/solver.hpp"
#include "fswkb/wkb.hpp"
