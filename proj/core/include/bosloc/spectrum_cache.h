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

#ifndef BOSLOC_SPECTRUM_CACHE_H_
#define BOSLOC_SPECTRUM_CACHE_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "bosloc/eigensolver.h"

namespace bosloc {

struct SpectrumCacheKey {
  Grid grid;
  std::uint64_t provenance_hash = 0;
  std::size_t levels = 0;
  double tol = 0.0;

  std::uint64_t hash() const;
  std::string file_name() const;
};

// Binary spectra keyed by (grid, potential provenance, m, tol). Entries are
// written atomically; unreadable or mismatching entries count as misses.
class SpectrumCache {
 public:
  explicit SpectrumCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

  std::optional<Spectrum> load(const SpectrumCacheKey& key) const;
  void store(const SpectrumCacheKey& key, const Spectrum& spectrum) const;
  const std::filesystem::path& directory() const { return dir_; }

 private:
  std::filesystem::path dir_;
};

}  // namespace bosloc

#endif  // BOSLOC_SPECTRUM_CACHE_H_
