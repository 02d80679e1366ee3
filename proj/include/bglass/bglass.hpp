#pragma once

#include "bglass/bessel.hpp"
#include "bglass/constants.hpp"
#include "bglass/csv.hpp"
#include "bglass/errors.hpp"
#include "bglass/gp.hpp"
#include "bglass/localization.hpp"
#include "bglass/materials.hpp"
#include "bglass/quadrature.hpp"
#include "bglass/radial_grid.hpp"
#include "bglass/root_finding.hpp"
#include "bglass/superradiance.hpp"
#include "bglass/thermo.hpp"
#include "bglass/version.hpp"
