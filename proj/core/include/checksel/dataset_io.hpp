// Copyright 2026 The CheckSel Authors.
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

#include <string>
#include <vector>

#include "checksel/dataset.hpp"
#include "checksel/simsel.hpp"
#include "checksel/valuation.hpp"

namespace checksel {

// CSV with a header row; the label column is found by the name "label",
// every other column is a feature in file order. Doubles are written with
// shortest round-trip formatting, so write/read is lossless and rerun
// outputs are byte-identical.
Dataset read_dataset_csv(const std::string& path);
void write_dataset_csv(const std::string& path, const Dataset& data);

// Raw little-endian binary matrix: header "CKDS", uint32 N, uint32 d,
// uint32 byte offset of the label block; then N*d float32 features
// (row-major) and N int32 labels at the recorded offset.
Dataset read_dataset_raw(const std::string& path);
void write_dataset_raw(const std::string& path, const Dataset& data);

// Sniffs the magic bytes and dispatches to the raw or CSV reader.
Dataset read_dataset(const std::string& path);

// Values table: "index,value,source,epsilon,checkpoint_id" after '#'
// comment lines. Propagated rows carry "propagated:<from_index>" in the
// source column; multiple owning checkpoints are joined with '|'.
void write_values_csv(const std::string& path,
                      const std::vector<ValueRecord>& records,
                      const std::vector<std::string>& comments);
std::vector<ValueRecord> read_values_csv(const std::string& path);

// Contrib vectors, binary: header "CKCB", uint32 count, uint32 width; then
// per record a uint32 training index and `width` float64 entries.
void write_contribs(const std::string& path,
                    const std::vector<ContribVector>& contribs);
std::vector<ContribVector> read_contribs(const std::string& path);

// Subset file: '#' summary lines (f, objective, windows), then one training
// index per line.
void write_subset(const std::string& path, const SubsetResult& result);
std::vector<int> read_subset(const std::string& path);

std::string format_double(double v);  // shortest round-trip text

}  // namespace checksel
