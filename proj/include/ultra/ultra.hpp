#pragma once

// Everything in one include.

#include "ultra/error.hpp"
#include "ultra/text/utf8.hpp"

#include "ultra/corpus/types.hpp"
#include "ultra/corpus/encoding.hpp"
#include "ultra/corpus/clean.hpp"
#include "ultra/corpus/stopwords.hpp"
#include "ultra/corpus/pipeline.hpp"
#include "ultra/corpus/io.hpp"
#include "ultra/corpus/synthetic.hpp"

#include "ultra/embed/matrix.hpp"
#include "ultra/embed/chunk.hpp"
#include "ultra/embed/pool.hpp"
#include "ultra/embed/exchange.hpp"
#include "ultra/embed/synthetic.hpp"
#include "ultra/embed/provider.hpp"
#include "ultra/embed/embedder.hpp"

#include "ultra/reduce/pca.hpp"
#include "ultra/reduce/reducer.hpp"

#include "ultra/index/hnsw.hpp"
#include "ultra/index/collection.hpp"

#include "ultra/router/engine.hpp"

#include "ultra/eval/metrics.hpp"
#include "ultra/eval/harness.hpp"
