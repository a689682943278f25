#pragma once

#include "groupflow/agent.hpp"
#include "groupflow/calibration.hpp"
#include "groupflow/campaign.hpp"
#include "groupflow/config.hpp"
#include "groupflow/engine.hpp"
#include "groupflow/error.hpp"
#include "groupflow/field.hpp"
#include "groupflow/geometry.hpp"
#include "groupflow/io.hpp"
#include "groupflow/metrics.hpp"
#include "groupflow/parallel.hpp"
#include "groupflow/record.hpp"
#include "groupflow/rng.hpp"
#include "groupflow/scenario.hpp"
#include "groupflow/social.hpp"
#include "groupflow/state.hpp"
#include "groupflow/utility.hpp"
#include "groupflow/version.hpp"
#include "groupflow/weights.hpp"
