#include "edospipe/preprocess.hpp"

#include "edospipe/util.hpp"

namespace edos {

namespace {

bool is_space_cp(char32_t cp) {
  switch (cp) {
    case U'\t':
    case U'\n':
    case U'\v':
    case U'\f':
    case U'\r':
    case U' ':
    case 0x00A0:  // no-break space
    case 0x1680:
    case 0x2028:
    case 0x2029:
    case 0x202F:
    case 0x205F:
    case 0x3000:
      return true;
    default:
      return cp >= 0x2000 && cp <= 0x200A;
  }
}

// Keeps the basic multilingual letter/punctuation/space repertoire: BMP
// code points minus symbol and emoji blocks, format controls, and private
// use. Everything outside the BMP (emoji proper, pictographs) goes.
bool is_emoji_or_symbol(char32_t cp) {
  if (cp > 0xFFFF) return true;
  if (cp < 0x20 && !is_space_cp(cp)) return true;  // C0 controls
  if (cp >= 0x7F && cp <= 0x9F) return true;       // DEL + C1 controls
  if (cp >= 0x2100 && cp <= 0x2BFF) return true;   // letterlike..misc symbols
  if (cp >= 0x20D0 && cp <= 0x20FF) return true;   // combining symbol marks
  if (cp >= 0xFE00 && cp <= 0xFE0F) return true;   // variation selectors
  if (cp >= 0xE000 && cp <= 0xF8FF) return true;   // private use
  if (cp >= 0xFFF0) return true;                   // specials, U+FFFD
  if (cp == 0x200B || cp == 0x200C || cp == 0x200D) return true;  // ZW*
  return false;
}

char32_t lower_cp(char32_t cp) {
  if (cp >= U'A' && cp <= U'Z') return cp + 32;
  // Latin-1 uppercase, skipping the multiplication sign.
  if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 32;
  return cp;
}

bool is_hashtag_word_cp(char32_t cp) {
  if (cp == U'_') return true;
  if (cp >= U'0' && cp <= U'9') return true;
  if (cp >= U'a' && cp <= U'z') return true;
  if (cp >= U'A' && cp <= U'Z') return true;
  return cp >= 0xC0 && cp <= 0x2AF;  // Latin-1 / extended letters
}

}  // namespace

std::string normalize(const std::string& text, const NormalizationConfig& cfg) {
  std::vector<char32_t> cps = util::utf8_decode(text);

  if (cfg.lowercase) {
    for (char32_t& cp : cps) cp = lower_cp(cp);
  }

  if (cfg.strip_emoji) {
    std::vector<char32_t> kept;
    kept.reserve(cps.size());
    for (char32_t cp : cps) {
      if (!is_emoji_or_symbol(cp)) kept.push_back(cp);
    }
    cps = std::move(kept);
  }

  if (cfg.strip_hash_symbol || cfg.strip_hashtag_tokens) {
    std::vector<char32_t> kept;
    kept.reserve(cps.size());
    for (size_t i = 0; i < cps.size(); ++i) {
      if (cps[i] != U'#') {
        kept.push_back(cps[i]);
        continue;
      }
      if (cfg.strip_hashtag_tokens) {
        while (i + 1 < cps.size() && is_hashtag_word_cp(cps[i + 1])) ++i;
      }
    }
    cps = std::move(kept);
  }

  if (cfg.strip_digits) {
    std::vector<char32_t> kept;
    kept.reserve(cps.size());
    for (char32_t cp : cps) {
      if (cp < U'0' || cp > U'9') kept.push_back(cp);
    }
    cps = std::move(kept);
  }

  if (cfg.collapse_repeats) {
    const auto max_run = static_cast<size_t>(cfg.max_run < 1 ? 1 : cfg.max_run);
    std::vector<char32_t> kept;
    kept.reserve(cps.size());
    size_t run = 0;
    for (size_t i = 0; i < cps.size(); ++i) {
      run = (i > 0 && cps[i] == cps[i - 1]) ? run + 1 : 1;
      if (run <= max_run) kept.push_back(cps[i]);
    }
    cps = std::move(kept);
  }

  if (cfg.collapse_whitespace) {
    std::vector<char32_t> kept;
    kept.reserve(cps.size());
    bool pending_space = false;
    for (char32_t cp : cps) {
      if (is_space_cp(cp)) {
        pending_space = !kept.empty();  // also trims leading whitespace
        continue;
      }
      if (pending_space) kept.push_back(U' ');
      pending_space = false;
      kept.push_back(cp);
    }
    cps = std::move(kept);  // trailing whitespace never got flushed
  }

  return util::utf8_encode(cps);
}

Dataset normalize_dataset(const Dataset& dataset,
                          const NormalizationConfig& cfg, size_t* dropped) {
  Dataset out;
  out.schema = dataset.schema;
  out.samples.reserve(dataset.samples.size());
  size_t empty_dropped = 0;
  for (const LabeledSample& s : dataset.samples) {
    LabeledSample copy = s;
    copy.text = normalize(s.text, cfg);
    if (copy.text.empty()) {
      if (s.provenance == Provenance::Gold) {
        throw DataError("gold sample \"" + s.id +
                        "\" is empty after normalization");
      }
      ++empty_dropped;
      continue;
    }
    out.samples.push_back(std::move(copy));
  }
  if (dropped) *dropped = empty_dropped;
  return out;
}

UnlabeledPool normalize_pool(const UnlabeledPool& pool,
                             const NormalizationConfig& cfg, size_t* dropped) {
  UnlabeledPool out;
  out.samples.reserve(pool.samples.size());
  size_t empty_dropped = 0;
  for (const PoolItem& item : pool.samples) {
    PoolItem copy{item.id, normalize(item.text, cfg)};
    if (copy.text.empty()) {
      ++empty_dropped;
      continue;
    }
    out.samples.push_back(std::move(copy));
  }
  if (dropped) *dropped = empty_dropped;
  return out;
}

}  // namespace edos
