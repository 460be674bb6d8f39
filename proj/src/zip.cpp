#include "stereoscan/zip.hpp"

#include <zlib.h>

#include <algorithm>
#include <cstring>

namespace stereoscan::zip {

namespace {

constexpr std::uint32_t kEocdSig = 0x06054b50;
constexpr std::uint32_t kCentralSig = 0x02014b50;
constexpr std::uint32_t kLocalSig = 0x04034b50;

std::uint16_t rd16(std::span<const std::uint8_t> b, std::size_t off) {
  return static_cast<std::uint16_t>(b[off] | (b[off + 1] << 8));
}

std::uint32_t rd32(std::span<const std::uint8_t> b, std::size_t off) {
  return static_cast<std::uint32_t>(b[off]) | (static_cast<std::uint32_t>(b[off + 1]) << 8) |
         (static_cast<std::uint32_t>(b[off + 2]) << 16) |
         (static_cast<std::uint32_t>(b[off + 3]) << 24);
}

std::vector<std::uint8_t> inflate_raw(std::span<const std::uint8_t> src,
                                      std::size_t expected_size) {
  std::vector<std::uint8_t> out(expected_size);
  z_stream zs;
  std::memset(&zs, 0, sizeof(zs));
  if (inflateInit2(&zs, -15) != Z_OK) throw ZipError("inflateInit2 failed");
  zs.next_in = const_cast<Bytef*>(src.data());
  zs.avail_in = static_cast<uInt>(src.size());
  zs.next_out = out.data();
  zs.avail_out = static_cast<uInt>(out.size());
  int rc = inflate(&zs, Z_FINISH);
  inflateEnd(&zs);
  if (rc != Z_STREAM_END) throw ZipError("deflate stream corrupt");
  out.resize(zs.total_out);
  return out;
}

}  // namespace

ZipReader::ZipReader(std::vector<std::uint8_t> bytes) : bytes_(std::move(bytes)) {
  // EOCD can be followed by up to 64K of archive comment; scan backwards.
  if (bytes_.size() < 22) throw ZipError("too small to be a zip archive");
  std::size_t scan_limit = bytes_.size() >= 22 + 65535 ? bytes_.size() - 22 - 65535 : 0;
  std::size_t eocd = std::string::npos;
  for (std::size_t pos = bytes_.size() - 22 + 1; pos-- > scan_limit;) {
    if (rd32(bytes_, pos) == kEocdSig) {
      eocd = pos;
      break;
    }
  }
  if (eocd == std::string::npos) throw ZipError("end-of-central-directory not found");

  std::uint16_t entry_count = rd16(bytes_, eocd + 10);
  std::uint32_t cd_offset = rd32(bytes_, eocd + 16);
  if (cd_offset >= bytes_.size()) throw ZipError("central directory offset out of range");

  std::size_t pos = cd_offset;
  for (std::uint16_t i = 0; i < entry_count; ++i) {
    if (pos + 46 > bytes_.size() || rd32(bytes_, pos) != kCentralSig)
      throw ZipError("central directory entry corrupt");
    Entry e;
    e.method = rd16(bytes_, pos + 10);
    e.crc32 = rd32(bytes_, pos + 16);
    e.compressed_size = rd32(bytes_, pos + 20);
    e.uncompressed_size = rd32(bytes_, pos + 24);
    std::uint16_t name_len = rd16(bytes_, pos + 28);
    std::uint16_t extra_len = rd16(bytes_, pos + 30);
    std::uint16_t comment_len = rd16(bytes_, pos + 32);
    e.local_header_offset = rd32(bytes_, pos + 42);
    if (pos + 46 + name_len > bytes_.size()) throw ZipError("entry name out of range");
    std::string name(reinterpret_cast<const char*>(bytes_.data()) + pos + 46, name_len);
    if (entries_.emplace(name, e).second) order_.push_back(name);
    pos += 46 + name_len + extra_len + comment_len;
  }
}

bool ZipReader::has(const std::string& name) const { return entries_.count(name) > 0; }

std::vector<std::string> ZipReader::names() const { return order_; }

std::vector<std::uint8_t> ZipReader::read(const std::string& name, bool* crc_ok) const {
  auto it = entries_.find(name);
  if (it == entries_.end()) throw ZipError("member not found: " + name);
  const Entry& e = it->second;

  std::size_t lh = e.local_header_offset;
  if (lh + 30 > bytes_.size() || rd32(bytes_, lh) != kLocalSig)
    throw ZipError("local header corrupt: " + name);
  std::uint16_t name_len = rd16(bytes_, lh + 26);
  std::uint16_t extra_len = rd16(bytes_, lh + 28);
  std::size_t data_off = lh + 30 + name_len + extra_len;
  if (data_off + e.compressed_size > bytes_.size())
    throw ZipError("member data out of range: " + name);

  std::span<const std::uint8_t> raw(bytes_.data() + data_off, e.compressed_size);
  std::vector<std::uint8_t> data;
  if (e.method == 0) {
    data.assign(raw.begin(), raw.end());
  } else if (e.method == 8) {
    data = inflate_raw(raw, e.uncompressed_size);
  } else {
    throw ZipError("unsupported compression method for " + name);
  }

  if (crc_ok != nullptr) {
    uLong crc = ::crc32(0L, data.data(), static_cast<uInt>(data.size()));
    *crc_ok = (static_cast<std::uint32_t>(crc) == e.crc32);
  }
  return data;
}

}  // namespace stereoscan::zip
