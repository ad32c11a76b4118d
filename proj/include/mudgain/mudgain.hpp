#pragma once

#include <mudgain/analytics.hpp>
#include <mudgain/model.hpp>
#include <mudgain/montecarlo.hpp>
#include <mudgain/philox.hpp>
#include <mudgain/region.hpp>
#include <mudgain/wilson.hpp>
