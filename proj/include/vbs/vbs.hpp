#pragma once

#include "vbs/error.hpp"
#include "vbs/text.hpp"
#include "vbs/corpus.hpp"
#include "vbs/tokenizer.hpp"
#include "vbs/segmenter.hpp"
#include "vbs/viewpoint.hpp"
#include "vbs/patterns.hpp"
#include "vbs/classifier.hpp"
#include "vbs/selector.hpp"
#include "vbs/summarizer.hpp"
#include "vbs/evaluation.hpp"
#include "vbs/synthetic.hpp"
