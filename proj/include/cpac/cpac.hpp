#pragma once

#include "cpac/core.hpp"
#include "cpac/classes.hpp"
#include "cpac/vc.hpp"
#include "cpac/learners.hpp"
#include "cpac/machine.hpp"
#include "cpac/harness.hpp"
