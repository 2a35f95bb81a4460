#pragma once

#include "synthload/core_types.hpp"
#include "synthload/rng.hpp"
#include "synthload/csv.hpp"
#include "synthload/ingest.hpp"
#include "synthload/desk_corpus.hpp"
#include "synthload/composition.hpp"
#include "synthload/prototypes.hpp"
#include "synthload/aggregation.hpp"
#include "synthload/validation.hpp"
#include "synthload/scenario.hpp"
#include "synthload/series_io.hpp"
#include "synthload/pipeline.hpp"
#include "synthload/commands.hpp"
