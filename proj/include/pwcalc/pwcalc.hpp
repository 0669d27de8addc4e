#pragma once

#include "pwcalc/matrix_core.hpp"
#include "pwcalc/extended_real.hpp"
#include "pwcalc/extended_sa.hpp"
#include "pwcalc/random.hpp"
#include "pwcalc/scalar_functions.hpp"
#include "pwcalc/quadrature.hpp"
#include "pwcalc/pw_calculus.hpp"
#include "pwcalc/perspectives.hpp"
#include "pwcalc/variational.hpp"
#include "pwcalc/suites.hpp"
#include "pwcalc/function_spec.hpp"
