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

#include "bosloc/spectrum_cache.h"

#include <cstring>
#include <fstream>
#include <system_error>

#include <fmt/format.h>

#include "bosloc/csv.h"
#include "bosloc/error.h"

namespace bosloc {
namespace {

constexpr char kMagic[8] = {'B', 'O', 'S', 'L', 'S', 'P', 'C', '1'};

struct Header {
  char magic[8];
  std::int32_t dim;
  std::int32_t points_per_side;
  double side;
  double spacing;
  double center[3];
  std::uint64_t provenance_hash;
  std::uint64_t levels;
  double tol;
  std::uint64_t rows;
};

Header make_header(const SpectrumCacheKey& key) {
  Header h{};
  std::memcpy(h.magic, kMagic, sizeof kMagic);
  h.dim = key.grid.dim;
  h.points_per_side = key.grid.points_per_side;
  h.side = key.grid.side;
  h.spacing = key.grid.spacing;
  for (int a = 0; a < 3; ++a) h.center[a] = key.grid.center[a];
  h.provenance_hash = key.provenance_hash;
  h.levels = key.levels;
  h.tol = key.tol;
  h.rows = key.grid.size();
  return h;
}

}  // namespace

std::uint64_t SpectrumCacheKey::hash() const {
  const Header h = make_header(*this);
  std::uint64_t x = 1469598103934665603ULL;
  const auto* b = reinterpret_cast<const unsigned char*>(&h);
  for (std::size_t i = 0; i < sizeof h; ++i) {
    x ^= b[i];
    x *= 1099511628211ULL;
  }
  return x;
}

std::string SpectrumCacheKey::file_name() const {
  return fmt::format("spectrum_{:016x}.bin", hash());
}

std::optional<Spectrum> SpectrumCache::load(const SpectrumCacheKey& key) const {
  std::ifstream in(dir_ / key.file_name(), std::ios::binary);
  if (!in) return std::nullopt;
  const Header want = make_header(key);
  Header got{};
  in.read(reinterpret_cast<char*>(&got), sizeof got);
  if (!in || std::memcmp(&want, &got, sizeof want) != 0) return std::nullopt;
  Spectrum s;
  s.grid = key.grid;
  s.energies.resize(key.levels);
  s.residuals.resize(key.levels);
  s.eigenfunctions.resize(static_cast<Eigen::Index>(got.rows),
                          static_cast<Eigen::Index>(key.levels));
  in.read(reinterpret_cast<char*>(s.energies.data()),
          static_cast<std::streamsize>(key.levels * sizeof(double)));
  in.read(reinterpret_cast<char*>(s.residuals.data()),
          static_cast<std::streamsize>(key.levels * sizeof(double)));
  in.read(reinterpret_cast<char*>(s.eigenfunctions.data()),
          static_cast<std::streamsize>(s.eigenfunctions.size() * sizeof(double)));
  if (!in) return std::nullopt;
  return s;
}

void SpectrumCache::store(const SpectrumCacheKey& key, const Spectrum& s) const {
  if (s.size() != key.levels || static_cast<std::size_t>(s.eigenfunctions.rows()) != key.grid.size()) {
    throw InvalidArgument("spectrum does not match its cache key");
  }
  ensure_directory(dir_);
  const std::filesystem::path path = dir_ / key.file_name();
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(fmt::format("cannot write spectrum cache {}", tmp.string()));
    const Header h = make_header(key);
    out.write(reinterpret_cast<const char*>(&h), sizeof h);
    out.write(reinterpret_cast<const char*>(s.energies.data()),
              static_cast<std::streamsize>(s.energies.size() * sizeof(double)));
    out.write(reinterpret_cast<const char*>(s.residuals.data()),
              static_cast<std::streamsize>(s.residuals.size() * sizeof(double)));
    out.write(reinterpret_cast<const char*>(s.eigenfunctions.data()),
              static_cast<std::streamsize>(s.eigenfunctions.size() * sizeof(double)));
    if (!out) throw IoError(fmt::format("write to {} failed", tmp.string()));
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError(fmt::format("cannot rename {}: {}", tmp.string(), ec.message()));
}

}  // namespace bosloc
