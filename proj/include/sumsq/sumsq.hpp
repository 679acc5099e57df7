#pragma once

// Symbolic calculus for complex polynomial vector fields, Hermite-Galerkin
// spectral analysis of the reduced ODE family, eigenvalue scaling sweeps, and
// the 3-D family falsifying the hypoellipticity a-priori inequality.

#include "sumsq/polynomial.hpp"
#include "sumsq/vector_field.hpp"
#include "sumsq/diff_op.hpp"
#include "sumsq/model.hpp"

#include "sumsq/band_matrix.hpp"
#include "sumsq/eigensolver.hpp"
#include "sumsq/hermite.hpp"
#include "sumsq/fd_oracle.hpp"

#include "sumsq/power_law.hpp"
#include "sumsq/scaling.hpp"

#include "sumsq/field3.hpp"
#include "sumsq/counterexample.hpp"

#include "sumsq/report.hpp"
#include "sumsq/version.hpp"
