#pragma once

// UTF-8 helpers and the canonical character count used by every metric.

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace vbs::text {

struct Decoded {
    char32_t scalar;
    std::size_t length; // bytes consumed
};

inline constexpr char32_t kReplacement = 0xFFFD;

/// Decodes the scalar value starting at byte `pos`. Malformed sequences
/// decode as U+FFFD consuming a single byte.
inline Decoded decode_at(std::string_view s, std::size_t pos) {
    const auto byte = [&](std::size_t i) { return static_cast<unsigned char>(s[i]); };
    const unsigned char lead = byte(pos);
    if (lead < 0x80) return {lead, 1};

    std::size_t len = 0;
    char32_t cp = 0;
    char32_t min = 0;
    if ((lead & 0xE0) == 0xC0) {
        len = 2; cp = lead & 0x1F; min = 0x80;
    } else if ((lead & 0xF0) == 0xE0) {
        len = 3; cp = lead & 0x0F; min = 0x800;
    } else if ((lead & 0xF8) == 0xF0) {
        len = 4; cp = lead & 0x07; min = 0x10000;
    } else {
        return {kReplacement, 1};
    }
    if (pos + len > s.size()) return {kReplacement, 1};
    for (std::size_t i = 1; i < len; ++i) {
        const unsigned char c = byte(pos + i);
        if ((c & 0xC0) != 0x80) return {kReplacement, 1};
        cp = (cp << 6) | (c & 0x3F);
    }
    if (cp < min || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return {kReplacement, 1};
    return {cp, len};
}

inline bool is_valid_utf8(std::string_view s) {
    for (std::size_t i = 0; i < s.size();) {
        const auto d = decode_at(s, i);
        // A literal U+FFFD is three bytes; the malformed fallback consumes one.
        if (d.scalar == kReplacement && d.length != 3) return false;
        i += d.length;
    }
    return true;
}

inline void append_utf8(std::string& out, char32_t cp) {
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

inline std::vector<char32_t> decode(std::string_view s) {
    std::vector<char32_t> out;
    out.reserve(s.size());
    for (std::size_t i = 0; i < s.size();) {
        const auto d = decode_at(s, i);
        out.push_back(d.scalar);
        i += d.length;
    }
    return out;
}

inline std::size_t scalar_length(std::string_view s) {
    std::size_t n = 0;
    for (std::size_t i = 0; i < s.size(); i += decode_at(s, i).length) ++n;
    return n;
}

/// Whitespace for trimming and token separation. Newline is handled
/// separately by callers that care about lines.
inline bool is_space(char32_t cp) {
    switch (cp) {
    case U' ': case U'\t': case U'\n': case U'\r': case U'\v': case U'\f':
    case 0x00A0: case 0x3000:
        return true;
    default:
        return false;
    }
}

/// Byte range [begin, end) of `line` with edge whitespace removed.
struct ByteRange {
    std::size_t begin;
    std::size_t end;
};

inline ByteRange trimmed_range(std::string_view line) {
    std::size_t begin = 0;
    while (begin < line.size()) {
        const auto d = decode_at(line, begin);
        if (!is_space(d.scalar)) break;
        begin += d.length;
    }
    std::size_t end = begin;
    for (std::size_t i = begin; i < line.size();) {
        const auto d = decode_at(line, i);
        i += d.length;
        if (!is_space(d.scalar)) end = i;
    }
    return {begin, end};
}

inline std::string_view trim(std::string_view s) {
    const auto r = trimmed_range(s);
    return s.substr(r.begin, r.end - r.begin);
}

/// Number of Unicode scalar values after trimming every line; newlines
/// never count.
inline std::size_t char_count(std::string_view text) {
    std::size_t total = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto nl = text.find('\n', start);
        const auto line = text.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start);
        total += scalar_length(trim(line));
        if (nl == std::string_view::npos) break;
        start = nl + 1;
    }
    return total;
}

/// Maps byte offsets of a text to offsets in its counted-scalar stream
/// (the scalars `char_count` counts).
class CountedIndex {
public:
    explicit CountedIndex(std::string_view text) : prefix_(text.size() + 1, 0) {
        std::size_t counted = 0;
        std::size_t start = 0;
        while (start <= text.size()) {
            const auto nl = text.find('\n', start);
            const std::size_t stop = nl == std::string_view::npos ? text.size() : nl;
            const auto range = trimmed_range(text.substr(start, stop - start));
            for (std::size_t i = start; i < stop;) {
                const auto d = decode_at(text, i);
                for (std::size_t k = 0; k < d.length; ++k) prefix_[i + k] = counted;
                if (i >= start + range.begin && i < start + range.end) ++counted;
                i += d.length;
            }
            if (nl == std::string_view::npos) break;
            prefix_[nl] = counted;
            start = nl + 1;
        }
        prefix_[text.size()] = counted;
    }

    /// Counted scalars strictly before byte `pos`.
    std::size_t offset_at(std::size_t pos) const { return prefix_.at(pos); }
    std::size_t total() const { return prefix_.back(); }

private:
    std::vector<std::size_t> prefix_;
};

inline char ascii_lower(char c) {
    return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

/// ASCII case folding; other scalars pass through unchanged.
inline std::string fold_case(std::string_view s) {
    std::string out(s);
    for (auto& c : out) c = ascii_lower(c);
    return out;
}

inline bool iequals(std::string_view a, std::string_view b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (ascii_lower(a[i]) != ascii_lower(b[i])) return false;
    return true;
}

/// 64-bit FNV-1a; stable across platforms, used to pin annotations to a segmentation.
inline std::uint64_t fnv1a(std::string_view s, std::uint64_t h = 0xcbf29ce484222325ULL) {
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

} // namespace vbs::text
