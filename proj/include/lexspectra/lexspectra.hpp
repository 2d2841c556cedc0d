#pragma once

#include "lexspectra/errors.hpp"
#include "lexspectra/numeric.hpp"
#include "lexspectra/graph.hpp"
#include "lexspectra/eigensolver.hpp"
#include "lexspectra/spectral_model.hpp"
#include "lexspectra/lexpower.hpp"
#include "lexspectra/invariants.hpp"
