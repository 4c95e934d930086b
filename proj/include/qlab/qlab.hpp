#pragma once

#include "qlab/braid.hpp"
#include "qlab/cartan.hpp"
#include "qlab/errors.hpp"
#include "qlab/extremal.hpp"
#include "qlab/field.hpp"
#include "qlab/lattice.hpp"
#include "qlab/lweights.hpp"
#include "qlab/matrix.hpp"
#include "qlab/qchar_fm.hpp"
#include "qlab/quiver.hpp"
#include "qlab/rational.hpp"
