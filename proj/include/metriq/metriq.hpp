#pragma once

#include "metriq/axiomatic.hpp"
#include "metriq/error.hpp"
#include "metriq/expr.hpp"
#include "metriq/harness.hpp"
#include "metriq/localops.hpp"
#include "metriq/loglog.hpp"
#include "metriq/nonlocal.hpp"
#include "metriq/odesolve.hpp"
#include "metriq/output.hpp"
#include "metriq/quadrature.hpp"
#include "metriq/series.hpp"
#include "metriq/specfun.hpp"
#include "metriq/summation.hpp"
