#ifndef TAILRISK_TAILRISK_HPP
#define TAILRISK_TAILRISK_HPP

#include "tailrisk/allocation.hpp"
#include "tailrisk/asymptotics.hpp"
#include "tailrisk/concentration.hpp"
#include "tailrisk/csv.hpp"
#include "tailrisk/distributions.hpp"
#include "tailrisk/loss_source.hpp"
#include "tailrisk/montecarlo.hpp"
#include "tailrisk/random.hpp"
#include "tailrisk/risk_measures.hpp"
#include "tailrisk/sample.hpp"

#endif // TAILRISK_TAILRISK_HPP
