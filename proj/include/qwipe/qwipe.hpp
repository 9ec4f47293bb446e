#pragma once

#include "qwipe/analytic.hpp"
#include "qwipe/channel.hpp"
#include "qwipe/complex_matrix.hpp"
#include "qwipe/csv.hpp"
#include "qwipe/density_matrix.hpp"
#include "qwipe/errors.hpp"
#include "qwipe/experiments.hpp"
