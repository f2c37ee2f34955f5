#pragma once

// Umbrella header: the complete library.

#include "lasso/acceptance.hpp"
#include "lasso/alphabet.hpp"
#include "lasso/automaton.hpp"
#include "lasso/constructions.hpp"
#include "lasso/dot.hpp"
#include "lasso/error.hpp"
#include "lasso/families.hpp"
#include "lasso/graph.hpp"
#include "lasso/hoa.hpp"
#include "lasso/lassolab.hpp"
#include "lasso/ltl.hpp"
#include "lasso/operations.hpp"
#include "lasso/oracle.hpp"
#include "lasso/synth/brute_force.hpp"
#include "lasso/synth/circuit.hpp"
#include "lasso/synth/encode.hpp"
#include "lasso/synth/external.hpp"
#include "lasso/synth/qdimacs.hpp"
#include "lasso/synth/sat.hpp"
#include "lasso/synth/solve.hpp"
#include "lasso/synth/synthesize.hpp"
