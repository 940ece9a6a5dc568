#pragma once

#include "ocn/belief.hpp"
#include "ocn/error.hpp"
#include "ocn/io.hpp"
#include "ocn/logic.hpp"
#include "ocn/network.hpp"
#include "ocn/pcn.hpp"
#include "ocn/simplify.hpp"
