#pragma once

#include "nestprof/approx.hpp"
#include "nestprof/atom.hpp"
#include "nestprof/datagen.hpp"
#include "nestprof/errors.hpp"
#include "nestprof/fd_mining.hpp"
#include "nestprof/ind_mining.hpp"
#include "nestprof/json_parse.hpp"
#include "nestprof/json_value.hpp"
#include "nestprof/json_write.hpp"
#include "nestprof/mine.hpp"
#include "nestprof/oracle.hpp"
#include "nestprof/pair_bitmap.hpp"
#include "nestprof/path.hpp"
#include "nestprof/path_eval.hpp"
#include "nestprof/rational.hpp"
#include "nestprof/unroll.hpp"
