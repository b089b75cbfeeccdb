#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace edos {

// Input data that violates a schema or file-format contract.
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A run/classifier/policy configuration that violates an invariant.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A single sentence could not be translated (retries exhausted, bad pair).
struct TranslationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace util {

// FNV-1a, 64-bit. Used for feature hashing and input fingerprints.
inline constexpr std::uint64_t kFnvOffset = 1469598103934665603ULL;
inline constexpr std::uint64_t kFnvPrime = 1099511628211ULL;

constexpr std::uint64_t fnv1a64(std::string_view data,
                                std::uint64_t seed = kFnvOffset) {
  std::uint64_t h = seed;
  for (unsigned char c : data) {
    h ^= c;
    h *= kFnvPrime;
  }
  return h;
}

std::string to_hex(std::uint64_t value);

// UTF-8 <-> code points. Invalid byte sequences decode to U+FFFD one byte
// at a time, so decoding never fails.
std::vector<char32_t> utf8_decode(std::string_view text);
std::string utf8_encode(const std::vector<char32_t>& code_points);

std::string to_lower_ascii(std::string_view text);
std::string trim(std::string_view text);
std::vector<std::string> split(std::string_view text, char sep);
std::vector<std::string> split_words(std::string_view text);
std::string join(const std::vector<std::string>& parts, std::string_view sep);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

// Shortest decimal form that parses back to the same double.
std::string format_double(double value);

}  // namespace util
}  // namespace edos
