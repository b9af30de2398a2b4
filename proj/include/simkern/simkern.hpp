#pragma once

#include "simkern/boolnet.hpp"
#include "simkern/csv.hpp"
#include "simkern/errors.hpp"
#include "simkern/forest.hpp"
#include "simkern/harness.hpp"
#include "simkern/learners.hpp"
#include "simkern/matrix.hpp"
#include "simkern/models.hpp"
#include "simkern/netflow.hpp"
#include "simkern/ode.hpp"
#include "simkern/pipeline.hpp"
#include "simkern/radiation.hpp"
#include "simkern/randspec.hpp"
#include "simkern/rng.hpp"
#include "simkern/similarity.hpp"
#include "simkern/svm.hpp"
