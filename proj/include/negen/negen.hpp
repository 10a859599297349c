#pragma once

// Umbrella header for the negen library.

#include "negen/energy_density.hpp"
#include "negen/errors.hpp"
#include "negen/families.hpp"
#include "negen/fock.hpp"
#include "negen/moments.hpp"
#include "negen/optimizer.hpp"
#include "negen/random.hpp"
#include "negen/verify.hpp"
