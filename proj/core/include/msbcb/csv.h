// Copyright 2026 The MSBCB Authors
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

#ifndef MSBCB_CSV_H_
#define MSBCB_CSV_H_

#include <string>
#include <string_view>
#include <vector>

namespace msbcb {

// Splits one CSV line on commas. Quoting is not supported; every file this
// project writes is plain numeric/identifier data.
std::vector<std::string> SplitCsvLine(std::string_view line);

std::string_view Trim(std::string_view s);

// Shortest round-trip representation; "inf"/"-inf"/"nan" for non-finite.
std::string FormatDouble(double x);

// Parses a double, accepting "inf". Throws ConfigError(context) on junk.
double ParseDouble(std::string_view s, const std::string& context);
long long ParseInt(std::string_view s, const std::string& context);

// Reads all lines; throws IoError when the file cannot be opened.
std::vector<std::string> ReadLines(const std::string& path);

}  // namespace msbcb

#endif  // MSBCB_CSV_H_
