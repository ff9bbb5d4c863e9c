#pragma once
// Versioned on-disk cache of central L-values, one line per record:
//
//   v<FORMAT> q char_index method precision re_hex im_hex
//
// with re/im in hexfloat so a round trip is bit-identical. Files are written
// whole to a temp path and renamed into place, so concurrent readers see
// either the old or the new file, never a torn one. Records from a different
// format version are ignored (forcing recompute), as are corrupt lines
// (skipped with a warning on stderr).

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nvlab/lfunc.hpp"

namespace nvlab {

inline constexpr int kCacheFormatVersion = 1;

class LValueCache {
  public:
    explicit LValueCache(std::filesystem::path dir);

    // All well-formed current-version records for modulus q, keyed by
    // (char_index, method).
    std::map<std::pair<std::uint32_t, std::uint8_t>, LValue> load(std::uint64_t q) const;

    // Replaces the per-q file atomically (write temp + rename).
    void store(std::uint64_t q, const std::vector<LValue>& records) const;

    const std::filesystem::path& dir() const { return dir_; }

  private:
    std::filesystem::path file_for(std::uint64_t q) const;
    std::filesystem::path dir_;
};

} // namespace nvlab
