#pragma once

#include <reflpos/core.hpp>
#include <reflpos/linops.hpp>
#include <reflpos/osr.hpp>
#include <reflpos/graphspace.hpp>
#include <reflpos/hardy.hpp>
#include <reflpos/quadrature.hpp>
#include <reflpos/scaling.hpp>
#include <reflpos/hankel.hpp>
#include <reflpos/pick.hpp>
