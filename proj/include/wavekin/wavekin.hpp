#pragma once

#include "wavekin/collision.hpp"
#include "wavekin/diagnostics.hpp"
#include "wavekin/error.hpp"
#include "wavekin/grid.hpp"
#include "wavekin/initcond.hpp"
#include "wavekin/kernel.hpp"
#include "wavekin/scheme.hpp"
#include "wavekin/weights.hpp"
