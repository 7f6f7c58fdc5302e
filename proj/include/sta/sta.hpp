#pragma once

#include "sta/error.hpp"
#include "sta/trap.hpp"
#include "sta/grid.hpp"
#include "sta/quadrature.hpp"
#include "sta/ode.hpp"
#include "sta/minimize.hpp"
#include "sta/curve.hpp"
#include "sta/ermakov.hpp"
#include "sta/protocols.hpp"
#include "sta/energies.hpp"
#include "sta/optimize.hpp"
