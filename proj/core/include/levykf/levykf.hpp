#pragma once

#include "levykf/errors.hpp"
#include "levykf/filters.hpp"
#include "levykf/linalg.hpp"
#include "levykf/model.hpp"
#include "levykf/montecarlo.hpp"
#include "levykf/noise.hpp"
