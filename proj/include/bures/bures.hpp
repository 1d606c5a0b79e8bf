#pragma once

#include "bures/barycentre.hpp"
#include "bures/bures_metric.hpp"
#include "bures/check_suite.hpp"
#include "bures/coupling.hpp"
#include "bures/geodesics.hpp"
#include "bures/random.hpp"
#include "bures/random_matrices.hpp"
#include "bures/spd_core.hpp"
