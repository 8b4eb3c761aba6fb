#pragma once

#include "lqg/connectivity.hpp"
#include "lqg/cost.hpp"
#include "lqg/examples.hpp"
#include "lqg/linalg.hpp"
#include "lqg/model.hpp"
#include "lqg/optimizer.hpp"
#include "lqg/synthesis.hpp"
#include "lqg/types.hpp"
