#pragma once

#include <string>

#include "edospipe/types.hpp"

namespace edos {

// Deterministic text normalization, applied identically before every
// training and inference call. Step order is fixed: lowercase, strip
// emoji/symbols, strip '#' (or whole hashtag tokens), strip digits,
// collapse repeated characters, collapse whitespace, trim. The composition
// is idempotent.
struct NormalizationConfig {
  bool lowercase = true;
  bool strip_emoji = true;
  bool strip_hash_symbol = true;
  // Alternative hashtag reading: drop the whole token, not just '#'.
  bool strip_hashtag_tokens = false;
  bool strip_digits = true;
  bool collapse_repeats = true;
  int max_run = 2;
  bool collapse_whitespace = true;
};

std::string normalize(const std::string& text,
                      const NormalizationConfig& cfg = {});

// Normalizes every sample text in place. Synthetic samples that become
// empty are dropped; gold samples that become empty are an input error.
Dataset normalize_dataset(const Dataset& dataset,
                          const NormalizationConfig& cfg = {},
                          size_t* dropped = nullptr);
UnlabeledPool normalize_pool(const UnlabeledPool& pool,
                             const NormalizationConfig& cfg = {},
                             size_t* dropped = nullptr);

}  // namespace edos
