#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <chrono>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace axe {

using U256 = boost::multiprecision::uint256_t;
using Bytes = std::vector<uint8_t>;

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

struct AxeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EmptyBytecodeError : AxeError {
    EmptyBytecodeError() : AxeError("EmptyBytecode: input contains no code") {}
};

struct MalformedHexError : AxeError {
    explicit MalformedHexError(const std::string& what) : AxeError("MalformedHex: " + what) {}
};

struct ManifestError : AxeError {
    std::string field_path;
    ManifestError(std::string path, const std::string& what)
        : AxeError("ManifestError at '" + path + "': " + what), field_path(std::move(path)) {}
};

struct RoleError : AxeError {
    explicit RoleError(const std::string& what) : AxeError("RoleError: " + what) {}
};

struct BindError : AxeError {
    explicit BindError(const std::string& what) : AxeError("BindError: " + what) {}
};

struct UsageError : AxeError {
    explicit UsageError(const std::string& what) : AxeError("UsageError: " + what) {}
};

struct TimeoutError : AxeError {
    explicit TimeoutError(const std::string& stage)
        : AxeError("Timeout: analysis deadline exceeded during " + stage) {}
};

// ---------------------------------------------------------------------------
// Hex / word helpers
// ---------------------------------------------------------------------------

// Decodes "deadbeef" or "0xdeadbeef"; rejects odd length and non-hex digits.
Bytes hex_decode(std::string_view text);
std::string hex_encode(const Bytes& data, bool with_prefix = true);

U256 u256_from_bytes(const uint8_t* data, size_t len);
// Big-endian, minimal-width 0x-prefixed form ("0x0" for zero).
std::string u256_hex(const U256& v);
// 32-byte big-endian rendering, used for topics.
std::string u256_hex32(const U256& v);
std::optional<uint64_t> u256_to_u64(const U256& v);

// ---------------------------------------------------------------------------
// Diagnostics logger (stderr, level via AXE_LOG)
// ---------------------------------------------------------------------------

enum class LogLevel { error = 0, warn = 1, info = 2, debug = 3 };

void set_log_level(LogLevel level);
LogLevel log_level();
std::optional<LogLevel> parse_log_level(std::string_view name);
void init_log_from_env();

void log_msg(LogLevel level, const std::string& message);
inline void log_error(const std::string& m) { log_msg(LogLevel::error, m); }
inline void log_warn(const std::string& m) { log_msg(LogLevel::warn, m); }
inline void log_info(const std::string& m) { log_msg(LogLevel::info, m); }
inline void log_debug(const std::string& m) { log_msg(LogLevel::debug, m); }

// ---------------------------------------------------------------------------
// Deadline
// ---------------------------------------------------------------------------

// Wall-clock budget shared by the analysis stages. check() throws TimeoutError
// once the budget is spent; a default-constructed deadline never fires.
class Deadline {
public:
    Deadline() = default;

    static Deadline after_seconds(uint64_t secs) {
        Deadline d;
        d.enabled_ = true;
        d.end_ = std::chrono::steady_clock::now() + std::chrono::seconds(secs);
        return d;
    }

    bool expired() const {
        return enabled_ && std::chrono::steady_clock::now() >= end_;
    }

    void check(const char* stage) const {
        if (expired()) throw TimeoutError(stage);
    }

private:
    bool enabled_ = false;
    std::chrono::steady_clock::time_point end_{};
};

}  // namespace axe
