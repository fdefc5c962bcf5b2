// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 crossctx contributors

#pragma once

#include "crossctx/config.hpp"
#include "crossctx/context_graph.hpp"
#include "crossctx/entity.hpp"
#include "crossctx/error.hpp"
#include "crossctx/eval_harness.hpp"
#include "crossctx/graph_builder.hpp"
#include "crossctx/graph_io.hpp"
#include "crossctx/import_resolver.hpp"
#include "crossctx/metrics.hpp"
#include "crossctx/project_files.hpp"
#include "crossctx/prompt_assembler.hpp"
#include "crossctx/retriever.hpp"
#include "crossctx/source_parser.hpp"
#include "crossctx/tokenizer.hpp"
