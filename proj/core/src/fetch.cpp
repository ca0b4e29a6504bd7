#include "phifn/fetch.hpp"

#include <openssl/sha.h>
#include <zlib.h>

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>

#include "phifn/common.hpp"

#include <httplib.h>

namespace phifn {
namespace {

constexpr const char* kMirror = "https://suitesparse-collection-website.herokuapp.com";

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw FetchError(p.string() + ": cannot open");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& p, std::string_view bytes) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw FetchError(p.string() + ": write failed");
}

std::string catalog_names() {
  std::string s;
  for (const auto& e : suite_catalog()) {
    if (!s.empty()) s += ", ";
    s += e.name;
  }
  return s;
}

std::string download(const std::string& url) {
  auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw FetchError("bad url: " + url);
  auto path_start = url.find('/', scheme_end + 3);
  std::string host = url.substr(0, path_start);
  std::string path = path_start == std::string::npos ? "/" : url.substr(path_start);

  httplib::Client client(host);
  client.set_follow_location(true);
  client.set_connection_timeout(30);
  client.set_read_timeout(120);
  auto res = client.Get(path);
  if (!res) throw FetchError(url + ": " + httplib::to_string(res.error()));
  if (res->status != 200)
    throw FetchError(url + ": HTTP " + std::to_string(res->status));
  return res->body;
}

}  // namespace

const std::vector<SuiteEntry>& suite_catalog() {
  static const std::vector<SuiteEntry> catalog = {
      {"orani678", std::string(kMirror) + "/MM/HB/orani678.tar.gz"},
      {"bcspwr10", std::string(kMirror) + "/MM/HB/bcspwr10.tar.gz"},
      {"gr_30_30", std::string(kMirror) + "/MM/HB/gr_30_30.tar.gz"},
      {"helm2d03", std::string(kMirror) + "/MM/GHS_indef/helm2d03.tar.gz"},
  };
  return catalog;
}

std::filesystem::path default_cache_dir() {
  if (const char* env = std::getenv("PHIFN_CACHE_DIR"); env && *env) return env;
  if (const char* home = std::getenv("HOME"); home && *home)
    return std::filesystem::path(home) / ".cache" / "phifn";
  return std::filesystem::path(".phifn_cache");
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[SHA256_DIGEST_LENGTH];
  SHA256(reinterpret_cast<const unsigned char*>(bytes.data()), bytes.size(), digest);
  static const char* hex = "0123456789abcdef";
  std::string out(2 * SHA256_DIGEST_LENGTH, '0');
  for (int i = 0; i < SHA256_DIGEST_LENGTH; ++i) {
    out[2 * i] = hex[digest[i] >> 4];
    out[2 * i + 1] = hex[digest[i] & 0xf];
  }
  return out;
}

std::string gunzip_bytes(std::string_view gz) {
  z_stream strm{};
  if (inflateInit2(&strm, 16 + MAX_WBITS) != Z_OK) throw FetchError("zlib init failed");
  strm.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(gz.data()));
  strm.avail_in = static_cast<uInt>(gz.size());
  std::string out;
  char buf[1 << 16];
  int rc = Z_OK;
  while (rc != Z_STREAM_END) {
    strm.next_out = reinterpret_cast<Bytef*>(buf);
    strm.avail_out = sizeof(buf);
    rc = inflate(&strm, Z_NO_FLUSH);
    if (rc != Z_OK && rc != Z_STREAM_END) {
      inflateEnd(&strm);
      throw FetchError("gzip decompression failed (corrupt archive?)");
    }
    out.append(buf, sizeof(buf) - strm.avail_out);
  }
  inflateEnd(&strm);
  return out;
}

std::string untar_extract(std::string_view tar, std::string_view suffix) {
  std::size_t off = 0;
  while (off + 512 <= tar.size()) {
    const char* hdr = tar.data() + off;
    if (hdr[0] == '\0') break;  // end-of-archive zero block

    char name[257] = {};                     // prefix(155) + '/' + name(100)
    std::size_t pos = 0;
    if (hdr[345] != '\0') {
      std::size_t plen = strnlen(hdr + 345, 155);
      std::memcpy(name, hdr + 345, plen);
      pos = plen;
      name[pos++] = '/';
    }
    std::size_t nlen = strnlen(hdr, 100);
    std::memcpy(name + pos, hdr, nlen);

    char size_field[13] = {};
    std::memcpy(size_field, hdr + 124, 12);
    const std::size_t size = static_cast<std::size_t>(std::strtoull(size_field, nullptr, 8));
    const char type = hdr[156];

    std::string_view entry(name);
    if ((type == '0' || type == '\0') && entry.size() >= suffix.size() &&
        entry.substr(entry.size() - suffix.size()) == suffix) {
      if (off + 512 + size > tar.size()) throw FetchError("tar member truncated");
      return std::string(tar.substr(off + 512, size));
    }
    off += 512 + (size + 511) / 512 * 512;
  }
  throw FetchError("archive has no member ending with '" + std::string(suffix) + "'");
}

std::filesystem::path fetch_suite(const std::string& name,
                                  const std::filesystem::path& cache_dir, bool offline) {
  const SuiteEntry* entry = nullptr;
  for (const auto& e : suite_catalog())
    if (e.name == name) entry = &e;
  if (!entry)
    throw ParameterError("unknown matrix '" + name + "'; catalog: " + catalog_names());

  std::filesystem::create_directories(cache_dir);
  const auto mtx = cache_dir / (name + ".mtx");
  const auto sum = cache_dir / (name + ".sha256");

  if (std::filesystem::exists(mtx)) {
    const std::string digest = sha256_hex(read_file(mtx));
    if (std::filesystem::exists(sum)) {
      std::string recorded = read_file(sum);
      if (auto nl = recorded.find_first_of("\r\n "); nl != std::string::npos)
        recorded.resize(nl);
      if (recorded != digest) {
        auto quarantined = mtx;
        quarantined += ".quarantine";
        std::filesystem::rename(mtx, quarantined);
        throw IntegrityError(mtx.string() + ": checksum mismatch (expected " + recorded +
                             ", got " + digest + "); file quarantined");
      }
    } else {
      write_file(sum, digest + "\n");  // adopt a manually placed file
    }
    return mtx;
  }

  if (offline)
    throw FetchError("offline and '" + name + "' is not cached; place the Matrix Market file at " +
                     mtx.string());

  const std::string body = untar_extract(gunzip_bytes(download(entry->url)), ".mtx");
  write_file(mtx, body);
  write_file(sum, sha256_hex(body) + "\n");
  return mtx;
}

}  // namespace phifn
