#pragma once

#include "cth/errors.hpp"
#include "cth/model.hpp"
#include "cth/quadrature.hpp"
#include "cth/eigenfn.hpp"
#include "cth/density.hpp"
#include "cth/transform.hpp"
#include "cth/plancherel.hpp"
#include "cth/symbol.hpp"
#include "cth/inequalities.hpp"
#include "cth/multipliers.hpp"
#include "cth/pde.hpp"
