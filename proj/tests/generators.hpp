#pragma once

// Random small 2-groups and strict morphisms for property tests.  Candidates
// are drawn freely and kept only if the library's validation accepts them.

#include "stackcoh/sampling.hpp"

#include "oracles.hpp"

namespace gen {

using namespace stackcoh;
using namespace stackcoh::sampling;

}  // namespace gen
