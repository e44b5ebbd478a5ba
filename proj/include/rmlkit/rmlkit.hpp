#pragma once

#include "bigcount.hpp"
#include "census.hpp"
#include "codes.hpp"
#include "error.hpp"
#include "field.hpp"
#include "geometry.hpp"
#include "lattice.hpp"
#include "linalg.hpp"
#include "parallel.hpp"
#include "qpoly.hpp"
