#pragma once

// Everything except the HTTP routes (which pull in httplib).

#include "ramsey/core.hpp"
#include "ramsey/position_io.hpp"
#include "ramsey/service.hpp"
#include "ramsey/solver.hpp"
#include "ramsey/strategy.hpp"
#include "ramsey/symmetry.hpp"
#include "ramsey/verifier.hpp"
