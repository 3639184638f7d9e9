#pragma once

#include "transitmesh/cliques.hpp"
#include "transitmesh/community.hpp"
#include "transitmesh/contact_graph.hpp"
#include "transitmesh/core.hpp"
#include "transitmesh/csv.hpp"
#include "transitmesh/epidemic.hpp"
#include "transitmesh/io.hpp"
#include "transitmesh/parallel.hpp"
#include "transitmesh/pipeline.hpp"
#include "transitmesh/rng.hpp"
#include "transitmesh/synthetic.hpp"
#include "transitmesh/trajectory.hpp"
#include "transitmesh/transfer.hpp"
