#pragma once

#include "accretive/errors.hpp"
#include "accretive/rng.hpp"
#include "accretive/numerics.hpp"
#include "accretive/accretivity.hpp"
#include "accretive/perturbation.hpp"
#include "accretive/generators.hpp"
#include "accretive/semigroup.hpp"
#include "accretive/lemma.hpp"
#include "accretive/trotter.hpp"
#include "accretive/matrix_io.hpp"
#include "accretive/parallel.hpp"
#include "accretive/report.hpp"
#include "accretive/commands.hpp"
