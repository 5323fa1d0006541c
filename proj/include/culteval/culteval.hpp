// Copyright 2026 The culteval Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "culteval/error.hpp"
#include "culteval/text.hpp"
#include "culteval/hash.hpp"
#include "culteval/io.hpp"
#include "culteval/parallel.hpp"
#include "culteval/corpus.hpp"
#include "culteval/surface_metrics.hpp"
#include "culteval/external_scorer.hpp"
#include "culteval/prompt.hpp"
#include "culteval/judge.hpp"
#include "culteval/mock_backend.hpp"
#include "culteval/http_backend.hpp"
#include "culteval/filter.hpp"
#include "culteval/hypothesis.hpp"
#include "culteval/acre.hpp"
#include "culteval/error_taxonomy.hpp"
#include "culteval/meta_eval.hpp"
#include "culteval/mining.hpp"
#include "culteval/mt_runner.hpp"
#include "culteval/run.hpp"
