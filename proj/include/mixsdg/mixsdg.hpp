#pragma once

#include "mixsdg/format.hpp"
#include "mixsdg/graph.hpp"
#include "mixsdg/graph_io.hpp"
#include "mixsdg/io.hpp"
#include "mixsdg/model.hpp"
#include "mixsdg/pipeline.hpp"
#include "mixsdg/preprocess.hpp"
#include "mixsdg/sim.hpp"
#include "mixsdg/spectral.hpp"
#include "mixsdg/stats.hpp"
