#pragma once

#include "editwalk/chain.hpp"
#include "editwalk/commute.hpp"
#include "editwalk/config.hpp"
#include "editwalk/edge_set.hpp"
#include "editwalk/edit.hpp"
#include "editwalk/error.hpp"
#include "editwalk/host_graph.hpp"
#include "editwalk/io.hpp"
#include "editwalk/lattice.hpp"
#include "editwalk/linalg.hpp"
#include "editwalk/mixing.hpp"
#include "editwalk/numeric.hpp"
#include "editwalk/process.hpp"
#include "editwalk/random.hpp"
#include "editwalk/scalar.hpp"
#include "editwalk/spectral.hpp"
#include "editwalk/verify.hpp"
#include "editwalk/weights.hpp"
