#pragma once

// Umbrella header: geolocation streams -> travel diaries, combined
// diary/app datasets, cross-source estimates, and the simulator used to
// verify the lot.

#include "geodiary/config.hpp"
#include "geodiary/csv.hpp"
#include "geodiary/diary.hpp"
#include "geodiary/errors.hpp"
#include "geodiary/estimate.hpp"
#include "geodiary/geo.hpp"
#include "geodiary/geocode.hpp"
#include "geodiary/harmonize.hpp"
#include "geodiary/mode.hpp"
#include "geodiary/router.hpp"
#include "geodiary/simulate.hpp"
#include "geodiary/stops.hpp"
#include "geodiary/time.hpp"
#include "geodiary/trace.hpp"
