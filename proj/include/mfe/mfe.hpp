#ifndef MFE_MFE_HPP
#define MFE_MFE_HPP

#include "mfe/analysis.hpp"
#include "mfe/dataset.hpp"
#include "mfe/engine.hpp"
#include "mfe/error.hpp"
#include "mfe/infotheo.hpp"
#include "mfe/io.hpp"
#include "mfe/landmarking.hpp"
#include "mfe/measure.hpp"
#include "mfe/metabase.hpp"
#include "mfe/model_based.hpp"
#include "mfe/rng.hpp"
#include "mfe/shapiro_wilk.hpp"
#include "mfe/simple.hpp"
#include "mfe/statistical.hpp"
#include "mfe/stats.hpp"
#include "mfe/summarize.hpp"
#include "mfe/transform.hpp"
#include "mfe/tree.hpp"

#endif  // MFE_MFE_HPP
