#pragma once

#include "feykac/errors.hpp"
#include "feykac/fkmc.hpp"
#include "feykac/grid.hpp"
#include "feykac/mehler.hpp"
#include "feykac/pde.hpp"
#include "feykac/potentials.hpp"
#include "feykac/quadrature.hpp"
#include "feykac/rng.hpp"
#include "feykac/splitting.hpp"
#include "feykac/wiener.hpp"
