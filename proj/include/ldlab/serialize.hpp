// Copyright (c) 2026 The ldlab developers.
// SPDX-License-Identifier: Apache-2.0
//
// JSON schemas shared by all modules: matrices as {dims, re, im} (row-major),
// channels, Choi matrices and code encodings.

#pragma once

#include "ldlab/channels.hpp"
#include "ldlab/codes.hpp"
#include "ldlab/fock.hpp"

#include <json.hpp>

namespace ldlab::serialize {

using nlohmann::json;

json matrix_to_json(const fock::Matrix& m);
fock::Matrix matrix_from_json(const json& j);

json vector_to_json(const fock::Vector& v);
fock::Vector vector_from_json(const json& j);

json channel_to_json(const channels::KrausChannel& ch);
channels::KrausChannel channel_from_json(const json& j);

json choi_to_json(const channels::ChoiMatrix& c);
channels::ChoiMatrix choi_from_json(const json& j);

json code_to_json(const codes::CodeEncoding& code);
codes::CodeEncoding code_from_json(const json& j);

}  // namespace ldlab::serialize
