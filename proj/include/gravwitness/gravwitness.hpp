/**
 * @file gravwitness.hpp
 * @brief Umbrella header.
 */
#pragma once

#include "constraints.hpp"
#include "core.hpp"
#include "decoherence.hpp"
#include "gravfield.hpp"
#include "gravphase.hpp"
#include "io.hpp"
#include "spinstate.hpp"
#include "sweep.hpp"
