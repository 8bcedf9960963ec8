#pragma once

#include "densecode/tensor.hpp"
#include "densecode/gates.hpp"
#include "densecode/state.hpp"
#include "densecode/channels.hpp"
#include "densecode/simplex.hpp"
#include "densecode/metrics.hpp"
#include "densecode/qec.hpp"
#include "densecode/purification.hpp"
#include "densecode/protocol.hpp"
#include "densecode/experiments.hpp"
