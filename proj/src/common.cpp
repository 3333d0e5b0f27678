#include "axe/common.hpp"

#include <cstdio>
#include <cstdlib>

namespace axe {

static int hex_nibble(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

Bytes hex_decode(std::string_view text) {
    if (text.size() >= 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X'))
        text.remove_prefix(2);
    if (text.size() % 2 != 0)
        throw MalformedHexError("odd number of hex digits (" + std::to_string(text.size()) + ")");
    Bytes out;
    out.reserve(text.size() / 2);
    for (size_t i = 0; i < text.size(); i += 2) {
        int hi = hex_nibble(text[i]);
        int lo = hex_nibble(text[i + 1]);
        if (hi < 0 || lo < 0)
            throw MalformedHexError(std::string("invalid hex digit '") + text[i + (hi < 0 ? 0 : 1)] +
                                    "' at position " + std::to_string(i));
        out.push_back(static_cast<uint8_t>((hi << 4) | lo));
    }
    return out;
}

std::string hex_encode(const Bytes& data, bool with_prefix) {
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve(data.size() * 2 + 2);
    if (with_prefix) out += "0x";
    for (uint8_t b : data) {
        out += digits[b >> 4];
        out += digits[b & 0x0f];
    }
    return out;
}

U256 u256_from_bytes(const uint8_t* data, size_t len) {
    U256 v = 0;
    for (size_t i = 0; i < len && i < 32; ++i) {
        v <<= 8;
        v |= data[i];
    }
    return v;
}

std::string u256_hex(const U256& v) {
    std::string body;
    U256 x = v;
    if (x == 0) body = "0";
    static const char* digits = "0123456789abcdef";
    while (x != 0) {
        body += digits[static_cast<unsigned>(x & 0xf)];
        x >>= 4;
    }
    std::string out = "0x";
    out.append(body.rbegin(), body.rend());
    return out;
}

std::string u256_hex32(const U256& v) {
    static const char* digits = "0123456789abcdef";
    std::string out = "0x";
    for (int i = 31; i >= 0; --i) {
        unsigned byte = static_cast<unsigned>((v >> (i * 8)) & 0xff);
        out += digits[byte >> 4];
        out += digits[byte & 0x0f];
    }
    return out;
}

std::optional<uint64_t> u256_to_u64(const U256& v) {
    if (v > U256(std::numeric_limits<uint64_t>::max())) return std::nullopt;
    return static_cast<uint64_t>(v);
}

// ---------------------------------------------------------------------------

static LogLevel g_level = LogLevel::warn;

void set_log_level(LogLevel level) { g_level = level; }
LogLevel log_level() { return g_level; }

std::optional<LogLevel> parse_log_level(std::string_view name) {
    if (name == "error") return LogLevel::error;
    if (name == "warn") return LogLevel::warn;
    if (name == "info") return LogLevel::info;
    if (name == "debug") return LogLevel::debug;
    return std::nullopt;
}

void init_log_from_env() {
    const char* env = std::getenv("AXE_LOG");
    if (!env) return;
    if (auto lvl = parse_log_level(env)) set_log_level(*lvl);
}

void log_msg(LogLevel level, const std::string& message) {
    if (static_cast<int>(level) > static_cast<int>(g_level)) return;
    static const char* names[] = {"error", "warn", "info", "debug"};
    std::fprintf(stderr, "axe: [%s] %s\n", names[static_cast<int>(level)], message.c_str());
}

}  // namespace axe
