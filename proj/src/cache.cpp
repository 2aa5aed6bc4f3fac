#include "eqsim/cache.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>

#include "eqsim/config.hpp"

namespace eqsim {

namespace fs = std::filesystem;

namespace {

constexpr char magic[4] = {'E', 'Q', 'S', 'D'};
constexpr std::uint32_t format_version = 1;

// 128-bit FNV-1a style content hash; stable across runs and platforms.
struct Hash128 {
  std::uint64_t hi = 0xcbf29ce484222325ULL;
  std::uint64_t lo = 0x9e3779b97f4a7c15ULL;
  void feed(const void* data, std::size_t size) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < size; ++i) {
      hi = (hi ^ bytes[i]) * 0x100000001b3ULL;
      lo = (lo ^ bytes[i]) * 0xc2b2ae3d27d4eb4fULL;
      lo ^= hi >> 29;
    }
  }
};

template <typename T>
void write_raw(std::ofstream& out, const T& value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
bool read_raw(std::ifstream& in, T& value) {
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  return in.good();
}

}  // namespace

std::string CacheKey::hex() const {
  char buf[33];
  std::snprintf(buf, sizeof(buf), "%016llx%016llx", static_cast<unsigned long long>(hi),
                static_cast<unsigned long long>(lo));
  return std::string(buf);
}

CacheKey spectral_cache_key(const SpinChainSpec& spec, double degeneracy_tolerance) {
  nlohmann::json j = system_to_json(spec);
  j["degeneracy_tolerance"] = degeneracy_tolerance;
  std::string canonical = j.dump();
  Hash128 h;
  h.feed(canonical.data(), canonical.size());
  return CacheKey{h.hi, h.lo};
}

std::string resolve_cache_dir(const std::string& configured) {
  if (const char* env = std::getenv("EQSIM_CACHE_DIR"); env && *env) return env;
  if (!configured.empty()) return configured;
  return ".eqsim-cache";
}

void cache_store(const std::string& dir, const CacheKey& key, const SpectralDecomposition& dec) {
  fs::create_directories(dir);
  fs::path final_path = fs::path(dir) / (key.hex() + ".eqd");
  fs::path tmp_path = final_path;
  tmp_path += ".tmp";
  {
    std::ofstream out(tmp_path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write cache file " + tmp_path.string());
    out.write(magic, 4);
    write_raw(out, format_version);
    std::uint64_t dim = static_cast<std::uint64_t>(dec.dimension());
    std::uint64_t levels = static_cast<std::uint64_t>(dec.levels());
    write_raw(out, dim);
    write_raw(out, levels);
    write_raw(out, dec.degeneracy_tolerance);
    write_raw(out, dec.norm);
    for (Index k = 0; k < dec.levels(); ++k) write_raw(out, dec.distinct_energies(k));
    for (Index k = 0; k < dec.levels(); ++k) {
      std::int64_t m = static_cast<std::int64_t>(dec.multiplicities[static_cast<std::size_t>(k)]);
      write_raw(out, m);
    }
    // Eigenbasis in Eigen's native column-major layout, re/im doubles.
    out.write(reinterpret_cast<const char*>(dec.eigenbasis.data()),
              static_cast<std::streamsize>(sizeof(Complex) * static_cast<std::size_t>(dim) * dim));
    if (!out) throw std::runtime_error("short write to cache file " + tmp_path.string());
  }
  fs::rename(tmp_path, final_path);  // atomic publish
}

std::optional<SpectralDecomposition> cache_load(const std::string& dir, const CacheKey& key,
                                                std::string* warning) {
  fs::path path = fs::path(dir) / (key.hex() + ".eqd");
  std::error_code ec;
  if (!fs::exists(path, ec)) return std::nullopt;
  std::ifstream in(path, std::ios::binary);
  auto corrupt = [&](const std::string& why) -> std::optional<SpectralDecomposition> {
    if (warning) *warning = "cache entry " + path.string() + " ignored: " + why;
    return std::nullopt;
  };
  if (!in) return corrupt("cannot open");
  char m[4];
  in.read(m, 4);
  if (!in.good() || std::memcmp(m, magic, 4) != 0) return corrupt("bad magic");
  std::uint32_t version = 0;
  if (!read_raw(in, version) || version != format_version) return corrupt("format version mismatch");
  std::uint64_t dim = 0, levels = 0;
  if (!read_raw(in, dim) || !read_raw(in, levels)) return corrupt("truncated header");
  if (dim == 0 || dim > (1u << 20) || levels == 0 || levels > dim) {
    return corrupt("implausible dimensions");
  }
  SpectralDecomposition dec;
  if (!read_raw(in, dec.degeneracy_tolerance) || !read_raw(in, dec.norm)) {
    return corrupt("truncated header");
  }
  dec.distinct_energies.resize(static_cast<Index>(levels));
  for (std::uint64_t k = 0; k < levels; ++k) {
    if (!read_raw(in, dec.distinct_energies(static_cast<Index>(k)))) {
      return corrupt("truncated energies");
    }
  }
  dec.multiplicities.resize(levels);
  dec.offsets.resize(levels + 1);
  Index offset = 0;
  for (std::uint64_t k = 0; k < levels; ++k) {
    std::int64_t mult = 0;
    if (!read_raw(in, mult) || mult < 1) return corrupt("truncated multiplicities");
    dec.multiplicities[k] = static_cast<Index>(mult);
    dec.offsets[k] = offset;
    offset += static_cast<Index>(mult);
  }
  dec.offsets[levels] = offset;
  if (offset != static_cast<Index>(dim)) return corrupt("multiplicities do not sum to dim");
  dec.eigenbasis.resize(static_cast<Index>(dim), static_cast<Index>(dim));
  in.read(reinterpret_cast<char*>(dec.eigenbasis.data()),
          static_cast<std::streamsize>(sizeof(Complex) * dim * dim));
  if (!in.good()) return corrupt("truncated eigenbasis");
  char extra;
  in.read(&extra, 1);
  if (!in.eof()) return corrupt("trailing bytes");
  return dec;
}

std::vector<CacheEntry> cache_list(const std::string& dir) {
  std::vector<CacheEntry> out;
  std::error_code ec;
  if (!fs::exists(dir, ec)) return out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".eqd") {
      out.push_back({entry.path().filename().string(), entry.file_size()});
    }
  }
  std::sort(out.begin(), out.end(),
            [](const CacheEntry& a, const CacheEntry& b) { return a.file < b.file; });
  return out;
}

std::size_t cache_clear(const std::string& dir) {
  std::size_t removed = 0;
  std::error_code ec;
  if (!fs::exists(dir, ec)) return removed;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".eqd") {
      std::error_code rec;
      if (fs::remove(entry.path(), rec)) ++removed;
    }
  }
  return removed;
}

}  // namespace eqsim
