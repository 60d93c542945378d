#pragma once

// Umbrella header for the whole library.

#include "ionsynth/channels.hpp"
#include "ionsynth/errors.hpp"
#include "ionsynth/fock.hpp"
#include "ionsynth/io.hpp"
#include "ionsynth/noise.hpp"
#include "ionsynth/synth.hpp"
#include "ionsynth/targets.hpp"
#include "ionsynth/version.hpp"
