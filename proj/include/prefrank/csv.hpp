// Copyright 2026 The Prefrank Authors.
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

#ifndef PREFRANK_CSV_HPP_
#define PREFRANK_CSV_HPP_

#include <cstdint>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace prefrank::csv {

// Splits one record on commas. Double-quoted fields may contain commas and
// doubled quotes. A trailing '\r' is dropped.
std::vector<std::string> SplitRecord(std::string_view line);

// Quotes `field` only if it contains a comma, quote or newline.
std::string QuoteField(std::string_view field);

// Reads the next line; returns false at end of stream. `line_number` counts
// physical lines, starting at 1.
bool NextLine(std::istream& in, std::string& line, int& line_number);

std::optional<std::int64_t> ParseInt(std::string_view text);
std::optional<double> ParseDouble(std::string_view text);

// Shortest text that parses back to exactly `value`.
std::string FormatDouble(double value);

}  // namespace prefrank::csv

#endif  // PREFRANK_CSV_HPP_
