#pragma once

// Convenience header pulling in the whole library.

#include "catalog.hpp"
#include "complex_structure.hpp"
#include "config.hpp"
#include "criticality.hpp"
#include "diskmap.hpp"
#include "errors.hpp"
#include "f4family.hpp"
#include "geometry.hpp"
#include "grid.hpp"
#include "harness.hpp"
#include "holsec.hpp"
#include "polynomial.hpp"
#include "report.hpp"
#include "secondvar.hpp"
#include "tolerances.hpp"
