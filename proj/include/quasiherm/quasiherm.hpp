#pragma once

#include "quasiherm/error.hpp"
#include "quasiherm/expm.hpp"
#include "quasiherm/fock.hpp"
#include "quasiherm/spectrum.hpp"
#include "quasiherm/quadratic.hpp"
#include "quasiherm/metric.hpp"
#include "quasiherm/grid.hpp"
#include "quasiherm/jacobi.hpp"
#include "quasiherm/rosen_morse.hpp"
#include "quasiherm/io.hpp"
#include "quasiherm/audit.hpp"
