#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace transitmesh {

// Indices into the passenger/trip tables of the graph that owns them.
using PassengerIdx = std::uint32_t;
using TripIdx = std::uint32_t;

// All times are integer minutes since the start of the service day.
// A service day may run past 24h (e.g. a 0:30 trip belonging to the
// previous day is minute 1470), so values are monotone, never wrapped.
using Minutes = std::int32_t;

// Input violated the file schema or a data invariant. The CLI maps
// this to exit code 2.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Filesystem failure (missing file, unwritable directory). Exit code 1.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

// Identifiers are limited to [A-Za-z0-9_./:-]+ so CSV output never
// needs quoting.
inline bool valid_id(const std::string& id) {
    if (id.empty()) return false;
    for (char c : id) {
        const bool ok = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') ||
                        (c >= '0' && c <= '9') || c == '_' || c == '.' ||
                        c == '/' || c == ':' || c == '-';
        if (!ok) return false;
    }
    return true;
}

// Key for an unordered passenger pair, u < v.
inline std::uint64_t pair_key(PassengerIdx u, PassengerIdx v) {
    return (static_cast<std::uint64_t>(u) << 32) | v;
}

inline PassengerIdx pair_key_u(std::uint64_t key) {
    return static_cast<PassengerIdx>(key >> 32);
}

inline PassengerIdx pair_key_v(std::uint64_t key) {
    return static_cast<PassengerIdx>(key & 0xffffffffu);
}

}  // namespace transitmesh
