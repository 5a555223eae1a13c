#pragma once

// Umbrella header.

#include "symplab/geometry.hpp"
#include "symplab/isotopies.hpp"
#include "symplab/models.hpp"
#include "symplab/ode.hpp"
#include "symplab/profiles.hpp"
#include "symplab/random.hpp"
#include "symplab/smooth.hpp"
#include "symplab/snf.hpp"
#include "symplab/suites.hpp"
#include "symplab/svg.hpp"
#include "symplab/topology.hpp"
