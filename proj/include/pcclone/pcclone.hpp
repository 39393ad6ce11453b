#pragma once

#include "pcclone/common.hpp"
#include "pcclone/linalg.hpp"
#include "pcclone/states.hpp"
#include "pcclone/cloner.hpp"
#include "pcclone/optimize.hpp"
#include "pcclone/audit.hpp"
