#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace stereoscan::zip {

class ZipError : public std::runtime_error {
 public:
  explicit ZipError(const std::string& what) : std::runtime_error(what) {}
};

// Read-only view over a zip archive held in memory. Supports stored and
// deflate members, which is all the Scratch editor ever emits.
class ZipReader {
 public:
  // Throws ZipError if the bytes are not a zip archive.
  explicit ZipReader(std::vector<std::uint8_t> bytes);

  bool has(const std::string& name) const;
  std::vector<std::string> names() const;  // central-directory order

  // Decompressed member bytes. Throws ZipError on missing member,
  // unsupported method, or corrupt stream. CRC mismatches are reported
  // through crc_ok rather than an error so callers can decide policy.
  std::vector<std::uint8_t> read(const std::string& name, bool* crc_ok = nullptr) const;

 private:
  struct Entry {
    std::uint16_t method = 0;
    std::uint32_t crc32 = 0;
    std::uint32_t compressed_size = 0;
    std::uint32_t uncompressed_size = 0;
    std::uint32_t local_header_offset = 0;
  };

  std::vector<std::uint8_t> bytes_;
  std::map<std::string, Entry> entries_;
  std::vector<std::string> order_;
};

}  // namespace stereoscan::zip
