#pragma once

#include "dynamics.hpp"
#include "errors.hpp"
#include "fock.hpp"
#include "gaussian.hpp"
#include "model.hpp"
#include "sweep.hpp"
#include "thermal.hpp"
