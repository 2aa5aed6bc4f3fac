#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "eqsim/model.hpp"
#include "eqsim/spectral.hpp"

namespace eqsim {

/// Content hash of (system spec, degeneracy tolerance); 128 bits rendered as
/// 32 hex digits.
struct CacheKey {
  std::uint64_t hi = 0;
  std::uint64_t lo = 0;
  std::string hex() const;
};

CacheKey spectral_cache_key(const SpinChainSpec& spec, double degeneracy_tolerance);

/// EQSIM_CACHE_DIR > configured > ".eqsim-cache".
std::string resolve_cache_dir(const std::string& configured);

/// Atomic (write-temp + rename) binary store of a decomposition.
void cache_store(const std::string& dir, const CacheKey& key, const SpectralDecomposition& dec);

/// Empty optional on miss; corrupted or mismatched entries are treated as a
/// miss and reported through *warning.
std::optional<SpectralDecomposition> cache_load(const std::string& dir, const CacheKey& key,
                                                std::string* warning = nullptr);

struct CacheEntry {
  std::string file;
  std::uintmax_t bytes = 0;
};

std::vector<CacheEntry> cache_list(const std::string& dir);
std::size_t cache_clear(const std::string& dir);

}  // namespace eqsim
