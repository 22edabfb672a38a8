#pragma once

#include "affkl/cache_file.hpp"
#include "affkl/element_spec.hpp"
#include "affkl/errors.hpp"
#include "affkl/fc_star.hpp"
#include "affkl/group.hpp"
#include "affkl/kl_engine.hpp"
#include "affkl/mu_decider.hpp"
#include "affkl/polynomial.hpp"
