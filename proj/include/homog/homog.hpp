#pragma once

// Umbrella header for the verification library.

#include "homog/blockops.hpp"
#include "homog/charfun.hpp"
#include "homog/defect_params.hpp"
#include "homog/dilation.hpp"
#include "homog/extremal.hpp"
#include "homog/identities.hpp"
#include "homog/linalg.hpp"
#include "homog/mobius.hpp"
#include "homog/rational.hpp"
#include "homog/report.hpp"
#include "homog/series.hpp"
#include "homog/spaces.hpp"
#include "homog/suite.hpp"
