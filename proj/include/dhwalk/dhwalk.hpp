#pragma once

#include "dhwalk/rational.hpp"
#include "dhwalk/errors.hpp"
#include "dhwalk/lattice.hpp"
#include "dhwalk/dh_family.hpp"
#include "dhwalk/scenario.hpp"
#include "dhwalk/rigidity.hpp"
#include "dhwalk/walk.hpp"
#include "dhwalk/classify.hpp"
#include "dhwalk/io.hpp"
