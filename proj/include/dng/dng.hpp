#pragma once

#include "dng/core/error.hpp"
#include "dng/core/linalg.hpp"
#include "dng/core/matrix.hpp"
#include "dng/core/rng.hpp"
#include "dng/core/softmax.hpp"
#include "dng/data/batch.hpp"
#include "dng/data/corpus.hpp"
#include "dng/data/corpus_io.hpp"
#include "dng/data/generate.hpp"
#include "dng/metrics/rouge.hpp"
#include "dng/model/bench.hpp"
#include "dng/model/checkpoint.hpp"
#include "dng/model/config.hpp"
#include "dng/model/decode.hpp"
#include "dng/model/optim.hpp"
#include "dng/model/params.hpp"
#include "dng/model/seq2seq.hpp"
#include "dng/model/train.hpp"
#include "dng/model/trainer.hpp"
#include "dng/ngram.hpp"
#include "dng/objectives/bag_of_ngrams.hpp"
#include "dng/objectives/composite.hpp"
#include "dng/objectives/cross_entropy.hpp"
#include "dng/objectives/grad_suite.hpp"
#include "dng/objectives/gradcheck.hpp"
#include "dng/objectives/loss.hpp"
#include "dng/objectives/ngram_match.hpp"
#include "dng/objectives/prob_count.hpp"
