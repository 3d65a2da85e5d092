#pragma once

#include "ccs/formula.hpp"
#include "ccs/unify.hpp"
#include "ccs/term.hpp"
#include "ccs/lambda.hpp"
#include "ccs/tables.hpp"
#include "ccs/rewrite.hpp"
#include "ccs/mgt.hpp"
#include "ccs/calculus.hpp"
#include "ccs/engine.hpp"
#include "ccs/search.hpp"
#include "ccs/oracle.hpp"
#include "ccs/grammar.hpp"
#include "ccs/metrics.hpp"
#include "ccs/problem.hpp"
#include "ccs/export.hpp"
