#pragma once

#include "modet/bench.hpp"
#include "modet/common.hpp"
#include "modet/config.hpp"
#include "modet/core.hpp"
#include "modet/io.hpp"
#include "modet/lof.hpp"
#include "modet/mds.hpp"
#include "modet/metrics.hpp"
#include "modet/rng.hpp"
#include "modet/simgen.hpp"
#include "modet/svg.hpp"
