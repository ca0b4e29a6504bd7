#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace phifn {

struct SuiteEntry {
  std::string name;
  std::string url;  // gzipped tar containing <name>/<name>.mtx
};

// The four matrices of the reproduction suite.
const std::vector<SuiteEntry>& suite_catalog();

// PHIFN_CACHE_DIR if set, else ~/.cache/phifn, else ./.phifn_cache.
std::filesystem::path default_cache_dir();

// Returns the path of <cache_dir>/<name>.mtx, downloading and unpacking on a
// cache miss (never when offline). Integrity: the sha256 of the .mtx is
// recorded on first acquisition and verified on every later call; a mismatch
// quarantines the file and throws IntegrityError. A manually placed .mtx is
// adopted and its checksum recorded.
std::filesystem::path fetch_suite(const std::string& name,
                                  const std::filesystem::path& cache_dir, bool offline = false);

// Pieces kept separately callable for tests.
std::string sha256_hex(std::string_view bytes);
std::string gunzip_bytes(std::string_view gz);
// First tar member whose path ends with `suffix` (ustar layout).
std::string untar_extract(std::string_view tar, std::string_view suffix);

}  // namespace phifn
