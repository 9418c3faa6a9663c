#pragma once

#include "adcminer/approx.hpp"
#include "adcminer/bitset.hpp"
#include "adcminer/dataset.hpp"
#include "adcminer/error.hpp"
#include "adcminer/evidence.hpp"
#include "adcminer/evidence_cache.hpp"
#include "adcminer/hitting_enum.hpp"
#include "adcminer/pipeline.hpp"
#include "adcminer/predicate_space.hpp"
#include "adcminer/sampling.hpp"
