// Copyright 2026 The bosloc Authors
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

#include "bosloc/csv.h"

#include <fstream>
#include <sstream>
#include <system_error>

#include <fmt/format.h>

#include "bosloc/error.h"

namespace bosloc {

std::string csv_number(double value) { return fmt::format("{:.17g}", value); }

std::string csv_row(const std::vector<std::string>& cells) {
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i > 0) out += ',';
    out += cells[i];
  }
  out += '\n';
  return out;
}

CsvTable::CsvTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

void CsvTable::add_row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_.size()) {
    throw InvalidArgument(
        fmt::format("CSV row has {} cells, table has {} columns", cells.size(), columns_.size()));
  }
  body_ += csv_row(cells);
  ++rows_;
}

void CsvTable::append_rendered(const std::string& rows) {
  body_ += rows;
  for (char c : rows) rows_ += c == '\n' ? 1 : 0;
}

std::string CsvTable::str() const { return csv_row(columns_) + body_; }

void CsvTable::write(const std::filesystem::path& path) const { write_text_file(path, str()); }

void ensure_directory(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError(fmt::format("cannot create directory {}: {}", dir.string(), ec.message()));
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) ensure_directory(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(fmt::format("cannot open {} for writing", tmp.string()));
    out << content;
    out.flush();
    if (!out) throw IoError(fmt::format("write to {} failed", tmp.string()));
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError(fmt::format("cannot rename {}: {}", tmp.string(), ec.message()));
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot open {}", path.string()));
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace bosloc
