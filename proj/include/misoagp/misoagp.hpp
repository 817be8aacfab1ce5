#pragma once

#include "misoagp/acquisition.hpp"
#include "misoagp/agp.hpp"
#include "misoagp/config.hpp"
#include "misoagp/errors.hpp"
#include "misoagp/gp.hpp"
#include "misoagp/harness.hpp"
#include "misoagp/kernels.hpp"
#include "misoagp/misoloop.hpp"
#include "misoagp/optimize.hpp"
#include "misoagp/sources.hpp"
#include "misoagp/spaces.hpp"
#include "misoagp/summary.hpp"
#include "misoagp/trace.hpp"
