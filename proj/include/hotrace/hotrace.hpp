#pragma once

#include "hotrace/errors.hpp"
#include "hotrace/rational.hpp"
#include "hotrace/special_functions.hpp"
#include "hotrace/quadrature.hpp"
#include "hotrace/roots.hpp"
#include "hotrace/system_params.hpp"
#include "hotrace/action_polynomial.hpp"
#include "hotrace/modulation_factor.hpp"
#include "hotrace/trace_formula.hpp"
#include "hotrace/ebk_reference.hpp"
#include "hotrace/classical_oracle.hpp"
