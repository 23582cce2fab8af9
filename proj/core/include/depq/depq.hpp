#pragma once

#include "depq/baselines.hpp"
#include "depq/compare.hpp"
#include "depq/error.hpp"
#include "depq/fd.hpp"
#include "depq/io.hpp"
#include "depq/qscore.hpp"
#include "depq/rational.hpp"
#include "depq/table.hpp"
