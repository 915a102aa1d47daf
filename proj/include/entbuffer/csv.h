// Copyright 2026 The entbuffer Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#ifndef ENTBUFFER_CSV_H
#define ENTBUFFER_CSV_H

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace entbuffer {

/// Reals are printed with 6 significant digits.
std::string format_real(double v);

using CsvCell = std::variant<double, std::int64_t, std::uint64_t, std::string>;

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  /// Throws std::invalid_argument if the cell count differs from the header.
  void add_row(const std::vector<CsvCell>& cells);

  const std::vector<std::string>& header() const { return header_; }
  std::size_t rows() const { return rows_.size(); }
  std::string str() const;

 private:
  std::vector<std::string> header_;
  std::vector<std::string> rows_;
};

/// Writes `content` to a temporary file beside `path`, then renames it over
/// `path`. Throws std::runtime_error on I/O failure.
void write_file_atomic(const std::string& path, const std::string& content);

/// Appends one line (a trailing newline is added).
void append_line(const std::string& path, const std::string& line);

struct ParsedCsv {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

/// Reads a plain comma-separated file (no quoting).
ParsedCsv read_csv(const std::string& path);

}  // namespace entbuffer

#endif  // ENTBUFFER_CSV_H
