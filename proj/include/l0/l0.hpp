#pragma once

#include "l0/algebra.hpp"
#include "l0/error.hpp"
#include "l0/escape.hpp"
#include "l0/group.hpp"
#include "l0/io.hpp"
#include "l0/lp.hpp"
#include "l0/pathology.hpp"
#include "l0/positive_type.hpp"
#include "l0/pugroup.hpp"
#include "l0/random.hpp"
#include "l0/rational.hpp"
#include "l0/script.hpp"
#include "l0/selftest.hpp"
#include "l0/set_cover.hpp"
#include "l0/submeasure.hpp"
