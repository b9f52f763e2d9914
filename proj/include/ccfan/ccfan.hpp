#pragma once

#include "core.hpp"
#include "matrix.hpp"
#include "seed.hpp"
#include "fan.hpp"
#include "checks.hpp"
#include "render.hpp"
#include "io.hpp"
#include "multiprecision.hpp"
