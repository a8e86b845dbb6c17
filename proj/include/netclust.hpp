#pragma once

#include "netclust/baselines.hpp"
#include "netclust/cache.hpp"
#include "netclust/distance.hpp"
#include "netclust/error.hpp"
#include "netclust/estimate.hpp"
#include "netclust/experiment.hpp"
#include "netclust/features.hpp"
#include "netclust/graph.hpp"
#include "netclust/graphon.hpp"
#include "netclust/link_prob.hpp"
#include "netclust/linalg.hpp"
#include "netclust/manifest.hpp"
#include "netclust/metrics.hpp"
#include "netclust/moments.hpp"
#include "netclust/ncge.hpp"
#include "netclust/nclm.hpp"
#include "netclust/parallel.hpp"
#include "netclust/random.hpp"
