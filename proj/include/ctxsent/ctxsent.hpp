#pragma once

// Umbrella header.
#include "ctxsent/bundle.hpp"
#include "ctxsent/classifier.hpp"
#include "ctxsent/corpus.hpp"
#include "ctxsent/emoticons.hpp"
#include "ctxsent/eval.hpp"
#include "ctxsent/label.hpp"
#include "ctxsent/localtime.hpp"
#include "ctxsent/ngram.hpp"
#include "ctxsent/porter.hpp"
#include "ctxsent/preprocess.hpp"
#include "ctxsent/priors.hpp"
#include "ctxsent/random.hpp"
#include "ctxsent/states.hpp"
#include "ctxsent/synth.hpp"
