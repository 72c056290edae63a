#pragma once

#include "comass.hpp"
#include "functionals.hpp"
#include "io.hpp"
#include "models.hpp"
#include "optimize.hpp"
#include "positivity.hpp"
#include "quadforms.hpp"
#include "rational.hpp"
#include "rng.hpp"
#include "tensor.hpp"
