#ifndef DYSCAN_DYSCAN_HPP
#define DYSCAN_DYSCAN_HPP

#include "dyscan/affordability.hpp"
#include "dyscan/audits.hpp"
#include "dyscan/baselines.hpp"
#include "dyscan/clustering.hpp"
#include "dyscan/corefind.hpp"
#include "dyscan/engine.hpp"
#include "dyscan/graph.hpp"
#include "dyscan/metrics.hpp"
#include "dyscan/neighbor_lists.hpp"
#include "dyscan/order_statistic_list.hpp"
#include "dyscan/rng.hpp"
#include "dyscan/runner.hpp"
#include "dyscan/sim_index.hpp"
#include "dyscan/similarity.hpp"
#include "dyscan/workload.hpp"

#endif
