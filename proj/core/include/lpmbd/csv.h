// Copyright 2026 The LP-MBD Authors
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

#ifndef LPMBD_CSV_H_
#define LPMBD_CSV_H_

#include <istream>
#include <ostream>
#include <string>
#include <vector>

namespace lpmbd {

// Minimal reader/writer for the numeric CSV artifacts (no quoting).
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  // Throws std::out_of_range for a missing column.
  int Column(const std::string& name) const;
  double Number(std::size_t row, const std::string& column) const;
};

CsvTable ReadCsv(std::istream& in);
std::vector<std::string> SplitCsvLine(const std::string& line);

// Shortest round-trip decimal representation ("nan" for NaN).
std::string FormatNumber(double value);

class CsvWriter {
 public:
  CsvWriter(std::ostream& out, const std::vector<std::string>& header);

  CsvWriter& operator<<(double value);
  CsvWriter& operator<<(int value);
  CsvWriter& operator<<(const std::string& value);
  void EndRow();

 private:
  void Separator();

  std::ostream& out_;
  std::size_t columns_;
  std::size_t pending_ = 0;
};

}  // namespace lpmbd

#endif  // LPMBD_CSV_H_
