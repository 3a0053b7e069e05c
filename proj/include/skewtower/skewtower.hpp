#pragma once

#include "skewtower/builtins.hpp"
#include "skewtower/error.hpp"
#include "skewtower/graded.hpp"
#include "skewtower/ideals.hpp"
#include "skewtower/linalg.hpp"
#include "skewtower/monomial.hpp"
#include "skewtower/parser.hpp"
#include "skewtower/render.hpp"
#include "skewtower/report.hpp"
#include "skewtower/ring_tower.hpp"
#include "skewtower/scalars.hpp"
#include "skewtower/series.hpp"
#include "skewtower/tower.hpp"
