#pragma once

#include "musielak/error.hpp"
#include "musielak/expr.hpp"
#include "musielak/measure.hpp"
#include "musielak/nfunc.hpp"
#include "musielak/space.hpp"
#include "musielak/approx.hpp"
