#pragma once

#include "afl/core.hpp"
#include "afl/experiments.hpp"
#include "afl/families.hpp"
#include "afl/io.hpp"
#include "afl/scheme.hpp"
#include "afl/spectral.hpp"
#include "afl/svg.hpp"
#include "afl/verify.hpp"
