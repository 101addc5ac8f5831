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

#include "lpmbd/csv.h"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace lpmbd {

int CsvTable::Column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return static_cast<int>(i);
  }
  throw std::out_of_range("csv has no column '" + name + "'");
}

double CsvTable::Number(std::size_t row, const std::string& column) const {
  return std::stod(rows.at(row).at(Column(column)));
}

std::vector<std::string> SplitCsvLine(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(field);
      field.clear();
    } else if (c != '\r') {
      field.push_back(c);
    }
  }
  fields.push_back(field);
  return fields;
}

CsvTable ReadCsv(std::istream& in) {
  CsvTable table;
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty csv");
  table.header = SplitCsvLine(line);
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto fields = SplitCsvLine(line);
    if (fields.size() != table.header.size()) {
      throw std::runtime_error("csv line " + std::to_string(line_no) + " has " +
                               std::to_string(fields.size()) + " fields, expected " +
                               std::to_string(table.header.size()));
    }
    table.rows.push_back(std::move(fields));
  }
  return table;
}

std::string FormatNumber(double value) {
  if (std::isnan(value)) return "nan";
  // Shortest representation that parses back to the same double.
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

CsvWriter::CsvWriter(std::ostream& out, const std::vector<std::string>& header)
    : out_(out), columns_(header.size()) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) out_ << ',';
    out_ << header[i];
  }
  out_ << '\n';
}

void CsvWriter::Separator() {
  if (pending_ == columns_) throw std::logic_error("csv row has too many fields");
  if (pending_++) out_ << ',';
}

CsvWriter& CsvWriter::operator<<(double value) {
  Separator();
  out_ << FormatNumber(value);
  return *this;
}

CsvWriter& CsvWriter::operator<<(int value) {
  Separator();
  out_ << value;
  return *this;
}

CsvWriter& CsvWriter::operator<<(const std::string& value) {
  Separator();
  out_ << value;
  return *this;
}

void CsvWriter::EndRow() {
  if (pending_ != columns_) throw std::logic_error("csv row has too few fields");
  out_ << '\n';
  pending_ = 0;
}

}  // namespace lpmbd
