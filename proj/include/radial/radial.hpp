#pragma once

#include "radial/matrix.hpp"
#include "radial/tolerances.hpp"
#include "radial/matcore.hpp"
#include "radial/random.hpp"
#include "radial/wnum.hpp"
#include "radial/gate.hpp"
#include "radial/adversary.hpp"
#include "radial/io.hpp"
#include "radial/sweep.hpp"
