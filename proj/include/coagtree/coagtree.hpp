#pragma once

#include "coagtree/config.hpp"
#include "coagtree/convergence.hpp"
#include "coagtree/errors.hpp"
#include "coagtree/exact.hpp"
#include "coagtree/fft.hpp"
#include "coagtree/forest_io.hpp"
#include "coagtree/grid.hpp"
#include "coagtree/kernel.hpp"
#include "coagtree/oracle.hpp"
#include "coagtree/plan.hpp"
#include "coagtree/series.hpp"
#include "coagtree/solver.hpp"
#include "coagtree/spectral.hpp"
#include "coagtree/tree.hpp"
#include "coagtree/verify.hpp"
