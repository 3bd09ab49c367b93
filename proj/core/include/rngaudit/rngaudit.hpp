#pragma once

#include "rngaudit/bitstream.hpp"
#include "rngaudit/entropy.hpp"
#include "rngaudit/errors.hpp"
#include "rngaudit/feller.hpp"
#include "rngaudit/report.hpp"
#include "rngaudit/sources.hpp"
#include "rngaudit/stats.hpp"
