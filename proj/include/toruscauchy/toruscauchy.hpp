// Umbrella header.
#ifndef TORUSCAUCHY_TORUSCAUCHY_HPP
#define TORUSCAUCHY_TORUSCAUCHY_HPP

#include "toruscauchy/bigmath.hpp"
#include "toruscauchy/coefficients.hpp"
#include "toruscauchy/config.hpp"
#include "toruscauchy/dft.hpp"
#include "toruscauchy/diagnostics.hpp"
#include "toruscauchy/diophantine.hpp"
#include "toruscauchy/lattice.hpp"
#include "toruscauchy/operators.hpp"
#include "toruscauchy/run.hpp"
#include "toruscauchy/solver.hpp"
#include "toruscauchy/symbols.hpp"

#endif  // TORUSCAUCHY_TORUSCAUCHY_HPP
