#pragma once

#include "frlsc/errors.hpp"
#include "frlsc/function_space.hpp"
#include "frlsc/parallel.hpp"
#include "frlsc/scalar_kernel.hpp"
#include "frlsc/integral_operator.hpp"
#include "frlsc/solver.hpp"
#include "frlsc/data.hpp"
#include "frlsc/classifier.hpp"
#include "frlsc/baseline.hpp"
#include "frlsc/benchmark.hpp"
#include "frlsc/model_io.hpp"
#include "frlsc/checks.hpp"
