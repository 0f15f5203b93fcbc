#pragma once

#include "fracvol/agent_market.hpp"
#include "fracvol/errors.hpp"
#include "fracvol/estimation.hpp"
#include "fracvol/fgn.hpp"
#include "fracvol/fracvol_sim.hpp"
#include "fracvol/io.hpp"
#include "fracvol/lob_market.hpp"
#include "fracvol/model.hpp"
#include "fracvol/option_pricing.hpp"
#include "fracvol/random.hpp"
#include "fracvol/return_dist.hpp"
#include "fracvol/stats.hpp"
