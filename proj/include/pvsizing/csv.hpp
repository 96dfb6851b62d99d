// Copyright 2026 The pvsizing Authors
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

// Minimal comma-separated tables: mandatory header row, '.' decimal
// separator, no quoting. Numbers are written in shortest round-trip form.

#pragma once

#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace pvsizing::csv {

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  // Throws std::runtime_error when the column is missing.
  [[nodiscard]] std::size_t column(std::string_view name) const;
  [[nodiscard]] bool has_column(std::string_view name) const;
  [[nodiscard]] double number(std::size_t row, std::size_t col) const;
  [[nodiscard]] long integer(std::size_t row, std::size_t col) const;
};

Table parse(std::string_view text, std::string_view source = "<memory>");
Table read(const std::string& path);

std::string format_number(double value);

class Writer {
 public:
  explicit Writer(std::vector<std::string> header);

  Writer& row(std::initializer_list<double> values);
  Writer& row(const std::vector<std::string>& cells);

  [[nodiscard]] std::string str() const { return text_; }
  void save(const std::string& path) const;

 private:
  std::size_t width_;
  std::string text_;
};

}  // namespace pvsizing::csv
