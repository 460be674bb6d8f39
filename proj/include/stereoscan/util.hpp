#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace stereoscan::util {

// Hex digests via OpenSSL EVP.
std::string md5_hex(std::span<const std::uint8_t> bytes);
std::string sha256_hex(std::span<const std::uint8_t> bytes);
std::string sha256_hex(std::string_view text);

std::string base64_encode(std::span<const std::uint8_t> bytes);

std::string to_lower(std::string_view s);
std::string trim(std::string_view s);
std::vector<std::string> split_lines(std::string_view text);

// Lowercase alphabetic word tokens, split on any non-letter.
std::vector<std::string> word_tokens(std::string_view text);

// Replaces everything outside [A-Za-z0-9._-] with '_'.
std::string sanitize_filename(std::string_view name);

// Deterministic Fisher-Yates permutation of 0..n-1. std::shuffle is
// implementation-defined, this one is stable across platforms.
std::vector<std::size_t> seeded_permutation(std::size_t n, std::uint64_t seed);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

}  // namespace stereoscan::util
