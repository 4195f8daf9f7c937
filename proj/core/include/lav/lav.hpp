#pragma once

#include "lav/audio.hpp"
#include "lav/error.hpp"
#include "lav/features.hpp"
#include "lav/latent.hpp"
#include "lav/mapping.hpp"
#include "lav/matrix.hpp"
#include "lav/prng.hpp"
#include "lav/trajectory.hpp"
