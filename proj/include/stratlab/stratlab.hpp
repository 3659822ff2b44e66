#pragma once

#include "stratlab/chaos.hpp"
#include "stratlab/config.hpp"
#include "stratlab/convergence.hpp"
#include "stratlab/correlation.hpp"
#include "stratlab/green_kernel.hpp"
#include "stratlab/grid.hpp"
#include "stratlab/pairings.hpp"
#include "stratlab/potential.hpp"
#include "stratlab/report.hpp"
#include "stratlab/simplex.hpp"
#include "stratlab/solver.hpp"
#include "stratlab/white_noise.hpp"
