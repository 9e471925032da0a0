#pragma once

#include "bignum.hpp"
#include "chebyshev.hpp"
#include "counting.hpp"
#include "errors.hpp"
#include "fit.hpp"
#include "modint.hpp"
#include "series.hpp"
#include "sieve.hpp"
#include "sphere.hpp"
#include "structure.hpp"
#include "summation.hpp"
