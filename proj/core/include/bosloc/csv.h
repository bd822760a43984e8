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

#ifndef BOSLOC_CSV_H_
#define BOSLOC_CSV_H_

#include <filesystem>
#include <string>
#include <vector>

namespace bosloc {

// Round-trip exact number formatting ({:.17g}).
std::string csv_number(double value);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> columns);

  const std::vector<std::string>& columns() const { return columns_; }
  std::size_t rows() const { return rows_; }

  // Throws InvalidArgument on a column-count mismatch.
  void add_row(const std::vector<std::string>& cells);
  // Appends pre-rendered rows (each terminated by '\n').
  void append_rendered(const std::string& rows);

  std::string str() const;
  void write(const std::filesystem::path& path) const;

 private:
  std::vector<std::string> columns_;
  std::string body_;
  std::size_t rows_ = 0;
};

std::string csv_row(const std::vector<std::string>& cells);

// Writes via a temporary file and rename; throws IoError.
void write_text_file(const std::filesystem::path& path, const std::string& content);
std::string read_text_file(const std::filesystem::path& path);
void ensure_directory(const std::filesystem::path& dir);

namespace schema {
inline const std::vector<std::string> kSpectrum = {"l", "realization", "i", "E_i", "residual"};
inline const std::vector<std::string> kOccupations = {
    "l",    "realization", "i",       "E_i",    "rho_i",      "mu",
    "mu_effective", "beta", "rho_bar", "lambda", "tail_model", "tail_density"};
inline const std::vector<std::string> kKinetic = {"l",       "realization", "k",
                                                  "eps_k",   "rho_kin_k",   "truncation_residual"};
inline const std::vector<std::string> kLocalization = {
    "l", "realization", "i", "E_i", "l1_metric", "sup_norm", "ipr", "davies_pass"};
inline const std::vector<std::string> kGoodBox = {
    "l_k", "center", "E", "norm", "gamma", "is_good", "eps_shift",
    "realization", "interior_points", "threshold"};
inline const std::vector<std::string> kIds = {"L", "E", "nu_hat", "stderr", "n_realizations"};
inline const std::vector<std::string> kOracle = {
    "spec_hash", "levels", "beta", "mu", "lambda", "volume", "interaction", "n_max",
    "i", "E_i", "occupation", "margin", "tail_bound"};
}  // namespace schema

}  // namespace bosloc

#endif  // BOSLOC_CSV_H_
