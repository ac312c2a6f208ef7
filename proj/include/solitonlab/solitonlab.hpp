#pragma once

#include "solitonlab/config.hpp"
#include "solitonlab/decomposition.hpp"
#include "solitonlab/effective.hpp"
#include "solitonlab/error.hpp"
#include "solitonlab/field.hpp"
#include "solitonlab/grid.hpp"
#include "solitonlab/harness.hpp"
#include "solitonlab/io.hpp"
#include "solitonlab/manifold.hpp"
#include "solitonlab/nonlinearity.hpp"
#include "solitonlab/potential.hpp"
#include "solitonlab/profiles.hpp"
#include "solitonlab/solver.hpp"
#include "solitonlab/spectral.hpp"
