#pragma once

// Umbrella header: jet arithmetic, noncommutative Bell polynomials,
// generalized Wronskians, and the identity verifiers built on them.

#include "liouville/errors.hpp"
#include "liouville/expr.hpp"
#include "liouville/jet.hpp"
#include "liouville/matrix.hpp"
#include "liouville/ncbell.hpp"
#include "liouville/verify.hpp"
#include "liouville/wronskian.hpp"
