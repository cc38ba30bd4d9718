#pragma once

#include "qfactor/channels.hpp"
#include "qfactor/errors.hpp"
#include "qfactor/free_product.hpp"
#include "qfactor/matrix_core.hpp"
#include "qfactor/matrix_units.hpp"
#include "qfactor/star_algebra.hpp"
#include "qfactor/tracial_algebra.hpp"
