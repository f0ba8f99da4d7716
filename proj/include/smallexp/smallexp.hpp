#pragma once

#include "arith.hpp"
#include "bounds.hpp"
#include "classgroup.hpp"
#include "directsearch.hpp"
#include "enumerator.hpp"
#include "int_types.hpp"
#include "parallel.hpp"
#include "primes.hpp"
#include "quadforms.hpp"
#include "redei.hpp"
#include "report.hpp"
#include "search_types.hpp"
#include "sieve.hpp"
