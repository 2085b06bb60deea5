#pragma once

#include "coherent/constants.hpp"
#include "coherent/dynamics.hpp"
#include "coherent/errors.hpp"
#include "coherent/fft.hpp"
#include "coherent/fock.hpp"
#include "coherent/grid.hpp"
#include "coherent/io.hpp"
#include "coherent/operators.hpp"
#include "coherent/parallel.hpp"
#include "coherent/phase_space.hpp"
#include "coherent/quadrature.hpp"
#include "coherent/report.hpp"
#include "coherent/states.hpp"
#include "coherent/verify.hpp"
