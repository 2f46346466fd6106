#pragma once

#include "prolong/chain_bounds.hpp"
#include "prolong/deriv_index.hpp"
#include "prolong/dsl.hpp"
#include "prolong/forms.hpp"
#include "prolong/json_io.hpp"
#include "prolong/linsolve.hpp"
#include "prolong/poly.hpp"
#include "prolong/prolongation.hpp"
#include "prolong/ratfunc.hpp"
#include "prolong/render.hpp"
#include "prolong/report.hpp"
#include "prolong/scalar.hpp"
#include "prolong/system.hpp"
#include "prolong/tower.hpp"
#include "prolong/verdict.hpp"
