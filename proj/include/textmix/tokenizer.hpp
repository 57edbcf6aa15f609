#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "textmix/common.hpp"

namespace textmix {

struct TokenizerConfig {
  // Keep word-internal apostrophes ("don't" stays one token).
  bool join_apostrophes = false;
};

namespace detail {

// Strict UTF-8 decoder. Advances pos past one scalar value; rejects overlong
// forms, surrogates, values past U+10FFFF, and truncated sequences.
inline std::uint32_t decode_utf8(std::string_view s, std::size_t& pos, const std::string& source) {
  auto bad = [&](std::size_t at) -> std::uint32_t {
    fail(strfmt("%s: invalid UTF-8 at byte offset %zu",
                source.empty() ? "input" : source.c_str(), at));
  };
  std::size_t start = pos;
  std::uint8_t b0 = static_cast<std::uint8_t>(s[pos++]);
  if (b0 < 0x80) return b0;
  auto cont = [&]() -> std::uint32_t {
    if (pos >= s.size()) bad(start);
    std::uint8_t b = static_cast<std::uint8_t>(s[pos]);
    if ((b & 0xC0) != 0x80) bad(start);
    ++pos;
    return b & 0x3F;
  };
  if (b0 >= 0xC2 && b0 <= 0xDF) {
    return (std::uint32_t(b0 & 0x1F) << 6) | cont();
  }
  if (b0 >= 0xE0 && b0 <= 0xEF) {
    std::uint32_t c1 = cont(), c2 = cont();
    std::uint32_t cp = (std::uint32_t(b0 & 0x0F) << 12) | (c1 << 6) | c2;
    if (cp < 0x800 || (cp >= 0xD800 && cp <= 0xDFFF)) bad(start);
    return cp;
  }
  if (b0 >= 0xF0 && b0 <= 0xF4) {
    std::uint32_t c1 = cont(), c2 = cont(), c3 = cont();
    std::uint32_t cp = (std::uint32_t(b0 & 0x07) << 18) | (c1 << 12) | (c2 << 6) | c3;
    if (cp < 0x10000 || cp > 0x10FFFF) bad(start);
    return cp;
  }
  bad(start);
  return 0;
}

inline void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

}  // namespace detail

// Letters: ASCII, Latin-1 supplement, Latin Extended-A/B, Greek and Coptic.
// Digits, punctuation and symbols are separators.
inline bool is_word_char(std::uint32_t cp) {
  if ((cp >= 'A' && cp <= 'Z') || (cp >= 'a' && cp <= 'z')) return true;
  if (cp >= 0x00C0 && cp <= 0x024F) return cp != 0x00D7 && cp != 0x00F7;
  if (cp >= 0x0370 && cp <= 0x03FF) {
    switch (cp) {
      case 0x0374: case 0x0375: case 0x0378: case 0x0379:
      case 0x037E: case 0x0380: case 0x0381: case 0x0382: case 0x0383:
      case 0x0384: case 0x0385: case 0x0387: case 0x03A2: case 0x03F6:
        return false;
      default:
        return true;
    }
  }
  return false;
}

// Case folding for the ranges above. Final sigma folds to medial sigma so
// word-final forms collapse with their lemma spelling.
inline std::uint32_t fold_char(std::uint32_t cp) {
  if (cp >= 'A' && cp <= 'Z') return cp + 0x20;
  if (cp >= 0x00C0 && cp <= 0x00DE && cp != 0x00D7) return cp + 0x20;
  if (cp >= 0x0100 && cp <= 0x012F) return cp | 1;
  if (cp == 0x0130) return 'i';
  if (cp >= 0x0132 && cp <= 0x0137) return cp | 1;
  if (cp >= 0x0139 && cp <= 0x0148) return (cp % 2 == 1) ? cp + 1 : cp;
  if (cp >= 0x014A && cp <= 0x0177) return cp | 1;
  if (cp == 0x0178) return 0x00FF;
  if (cp >= 0x0179 && cp <= 0x017E) return (cp % 2 == 1) ? cp + 1 : cp;
  if (cp == 0x017F) return 's';
  if (cp >= 0x01C4 && cp <= 0x01C6) return 0x01C6;
  if (cp >= 0x01C7 && cp <= 0x01C9) return 0x01C9;
  if (cp >= 0x01CA && cp <= 0x01CC) return 0x01CC;
  if (cp >= 0x01CD && cp <= 0x01DC) return (cp % 2 == 1) ? cp + 1 : cp;
  if (cp >= 0x01DE && cp <= 0x01EF) return cp | 1;
  if (cp >= 0x01F1 && cp <= 0x01F3) return 0x01F3;
  if (cp == 0x01F4) return 0x01F5;
  if (cp >= 0x01F8 && cp <= 0x021F) return cp | 1;
  if (cp >= 0x0222 && cp <= 0x0233) return cp | 1;
  if (cp >= 0x0246 && cp <= 0x024F) return cp | 1;
  if (cp == 0x0386) return 0x03AC;
  if (cp >= 0x0388 && cp <= 0x038A) return cp + 0x25;
  if (cp == 0x038C) return 0x03CC;
  if (cp == 0x038E || cp == 0x038F) return cp + 0x3F;
  if (cp >= 0x0391 && cp <= 0x03A1) return cp + 0x20;
  if (cp >= 0x03A3 && cp <= 0x03AB) return cp + 0x20;
  if (cp == 0x03C2) return 0x03C3;
  if (cp >= 0x03D8 && cp <= 0x03EF) return cp | 1;
  return cp;
}

/// Splits raw text into lowercase word tokens. `source` names the input in
/// error messages. Throws Error on undecodable input.
inline std::vector<std::string> tokenize(std::string_view raw, const TokenizerConfig& config = {},
                                         const std::string& source = {}) {
  std::vector<std::string> tokens;
  std::string current;
  bool pending_apostrophe = false;
  auto flush = [&] {
    pending_apostrophe = false;
    if (!current.empty()) {
      tokens.push_back(current);
      current.clear();
    }
  };
  std::size_t pos = 0;
  while (pos < raw.size()) {
    std::uint32_t cp = detail::decode_utf8(raw, pos, source);
    if (is_word_char(cp)) {
      if (pending_apostrophe) {
        current.push_back('\'');
        pending_apostrophe = false;
      }
      detail::append_utf8(current, fold_char(cp));
    } else if (config.join_apostrophes && (cp == 0x27 || cp == 0x2019) && !current.empty() &&
               !pending_apostrophe) {
      pending_apostrophe = true;
    } else {
      flush();
    }
  }
  flush();
  return tokens;
}

enum class StripStatus { stripped, unstripped, missing_end };

struct StripResult {
  std::string text;
  StripStatus status = StripStatus::unstripped;
  std::string warning;
};

namespace detail {

inline bool line_has_marker(std::string_view line, std::string_view what) {
  std::string upper(line);
  for (char& c : upper) {
    if (c >= 'a' && c <= 'z') c -= 0x20;
  }
  std::string spaced = std::string("*** ") + std::string(what);
  std::string tight = std::string("***") + std::string(what);
  return upper.find(spaced) != std::string::npos || upper.find(tight) != std::string::npos;
}

}  // namespace detail

/// Removes Project Gutenberg style header/footer blocks delimited by
/// "*** START OF ..." and "*** END OF ..." lines. Without a start marker the
/// input passes through unchanged; a start marker without a matching end
/// yields the text after the start line plus a warning.
inline StripResult strip_boilerplate(std::string_view raw) {
  StripResult result;
  std::size_t start_body = std::string_view::npos;  // byte after the start-marker line
  std::size_t end_line = std::string_view::npos;    // byte where the end-marker line begins
  std::size_t line_begin = 0;
  while (line_begin <= raw.size()) {
    std::size_t line_end = raw.find('\n', line_begin);
    std::size_t next = (line_end == std::string_view::npos) ? raw.size() + 1 : line_end + 1;
    std::string_view line = raw.substr(line_begin, (line_end == std::string_view::npos
                                                        ? raw.size()
                                                        : line_end) - line_begin);
    if (start_body == std::string_view::npos) {
      if (detail::line_has_marker(line, "START OF")) start_body = next > raw.size() ? raw.size() : next;
    } else if (detail::line_has_marker(line, "END OF")) {
      end_line = line_begin;
      break;
    }
    line_begin = next;
  }
  if (start_body == std::string_view::npos) {
    result.text.assign(raw);
    result.status = StripStatus::unstripped;
    return result;
  }
  if (end_line == std::string_view::npos) {
    result.text.assign(raw.substr(start_body));
    result.status = StripStatus::missing_end;
    result.warning = "start marker without end marker; kept everything after the start line";
    return result;
  }
  result.text.assign(raw.substr(start_body, end_line - start_body));
  result.status = StripStatus::stripped;
  return result;
}

inline const char* strip_status_name(StripStatus s) {
  switch (s) {
    case StripStatus::stripped: return "stripped";
    case StripStatus::missing_end: return "missing_end";
    default: return "unstripped";
  }
}

}  // namespace textmix
