#ifndef ASYMWELL_ASYMWELL_HPP
#define ASYMWELL_ASYMWELL_HPP

#include "asymwell/error.hpp"
#include "asymwell/numerics.hpp"
#include "asymwell/oracle.hpp"
#include "asymwell/potential.hpp"
#include "asymwell/quantize.hpp"
#include "asymwell/specfun.hpp"
#include "asymwell/spline.hpp"
#include "asymwell/twolevel.hpp"
#include "asymwell/wkb_matching.hpp"

#endif  // ASYMWELL_ASYMWELL_HPP
