#pragma once

#include "crosshunt/bench.hpp"
#include "crosshunt/bucketizer.hpp"
#include "crosshunt/cli.hpp"
#include "crosshunt/config.hpp"
#include "crosshunt/correlator.hpp"
#include "crosshunt/edge_rules.hpp"
#include "crosshunt/error.hpp"
#include "crosshunt/featurizer.hpp"
#include "crosshunt/graph.hpp"
#include "crosshunt/metrics.hpp"
#include "crosshunt/report.hpp"
#include "crosshunt/service.hpp"
#include "crosshunt/similarity.hpp"
#include "crosshunt/store.hpp"
#include "crosshunt/synthetic.hpp"
#include "crosshunt/workspace.hpp"
