#pragma once

// Umbrella header.

#include "stimwave/analytic.hpp"
#include "stimwave/correlations.hpp"
#include "stimwave/csv.hpp"
#include "stimwave/errors.hpp"
#include "stimwave/grid.hpp"
#include "stimwave/history_io.hpp"
#include "stimwave/optimize.hpp"
#include "stimwave/parallel.hpp"
#include "stimwave/params.hpp"
#include "stimwave/pulse.hpp"
#include "stimwave/qfactor.hpp"
#include "stimwave/quadrature.hpp"
#include "stimwave/solver.hpp"
#include "stimwave/special.hpp"
#include "stimwave/two_photon.hpp"
#include "stimwave/twochannel.hpp"
#include "stimwave/verify.hpp"
#include "stimwave/version.hpp"
