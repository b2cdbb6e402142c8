#ifndef ERLANG_CBC_ERLANG_CBC_HPP
#define ERLANG_CBC_ERLANG_CBC_HPP

/**
 * @file erlang_cbc.hpp
 * @brief Umbrella header: the whole toolkit in one include.
 *
 * Module map
 *  - model.hpp       parameters, validation, derived coefficients
 *  - normal.hpp      normal pdf/cdf and the hazard (inverse Mills) function
 *  - poisson.hpp     regularized incomplete gamma, Poisson cdf/pmf,
 *                    Wilson–Hilferty approximation
 *  - quadrature.hpp  adaptive Gauss–Kronrod integration
 *  - indicators.hpp  shared indicator assembly from sub-chain blockings
 *  - exact.hpp       exact engines (recursions, series, integral, full chain)
 *  - approx.hpp      normal-approximation and Wilson–Hilferty engines
 *  - asymptotic.hpp  regime classification, phase diagrams, √R staffing rules
 *  - staffing.hpp    minimum-staffing solver
 *  - simulate.hpp    discrete-event simulation oracle
 *  - record.hpp      flat output records, CSV/JSON serialization
 */

#include "erlang_cbc/model.hpp"
#include "erlang_cbc/normal.hpp"
#include "erlang_cbc/poisson.hpp"
#include "erlang_cbc/quadrature.hpp"
#include "erlang_cbc/indicators.hpp"
#include "erlang_cbc/exact.hpp"
#include "erlang_cbc/approx.hpp"
#include "erlang_cbc/asymptotic.hpp"
#include "erlang_cbc/staffing.hpp"
#include "erlang_cbc/simulate.hpp"
#include "erlang_cbc/record.hpp"

#endif  // ERLANG_CBC_ERLANG_CBC_HPP
