#pragma once

#include <cstdint>
#include <cstring>
#include <span>
#include <vector>

namespace vfs {

// Little-endian integer access, independent of host byte order.

inline void put_u32le(std::uint8_t* dst, std::uint32_t v) {
    dst[0] = static_cast<std::uint8_t>(v);
    dst[1] = static_cast<std::uint8_t>(v >> 8);
    dst[2] = static_cast<std::uint8_t>(v >> 16);
    dst[3] = static_cast<std::uint8_t>(v >> 24);
}

inline std::uint32_t get_u32le(const std::uint8_t* src) {
    return static_cast<std::uint32_t>(src[0]) |
           static_cast<std::uint32_t>(src[1]) << 8 |
           static_cast<std::uint32_t>(src[2]) << 16 |
           static_cast<std::uint32_t>(src[3]) << 24;
}

inline void put_i32le(std::uint8_t* dst, std::int32_t v) {
    put_u32le(dst, static_cast<std::uint32_t>(v));
}

inline std::int32_t get_i32le(const std::uint8_t* src) {
    return static_cast<std::int32_t>(get_u32le(src));
}

inline void put_u64le(std::uint8_t* dst, std::uint64_t v) {
    for (int i = 0; i < 8; ++i)
        dst[i] = static_cast<std::uint8_t>(v >> (8 * i));
}

inline std::uint64_t get_u64le(const std::uint8_t* src) {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i)
        v |= static_cast<std::uint64_t>(src[i]) << (8 * i);
    return v;
}

} // namespace vfs
