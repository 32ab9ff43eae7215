#pragma once

#include "score/reject.hpp"
#include "score/metrics.hpp"
#include "score/stack.hpp"
#include "score/synth.hpp"
#include "score/svg.hpp"
#include "score/io.hpp"
