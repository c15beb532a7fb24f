#pragma once

#include "wfax/alphabet.hpp"
#include "wfax/datagen.hpp"
#include "wfax/eq_search.hpp"
#include "wfax/error.hpp"
#include "wfax/harness.hpp"
#include "wfax/learner.hpp"
#include "wfax/lstm.hpp"
#include "wfax/numerics.hpp"
#include "wfax/obs_table.hpp"
#include "wfax/oracle.hpp"
#include "wfax/regression.hpp"
#include "wfax/wfa.hpp"
#include "wfax/wfa_io.hpp"
#include "wfax/wparen.hpp"
