#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "meshloc/types.hpp"

// Wire frames, big-endian throughout.
//
//   OGM       0x01 | origin:u16 | seqno:u32 | tq:u8 | ttl:u8 | gateway:u8
//   Announce  0x02 | node:u16 | count:u8 | count * (topic:u16 | flags:u8)
//   UWB       type:u8 (0x10 poll / 0x11 response / 0x12 final) | src:u16 |
//             dst:u16 | session:u32 | plen:u8 (0..64) | topic:u16 | payload

namespace meshloc::wire {

inline constexpr std::uint8_t kOgmType = 0x01;
inline constexpr std::uint8_t kAnnounceType = 0x02;
inline constexpr std::uint8_t kUwbPoll = 0x10;
inline constexpr std::uint8_t kUwbResponse = 0x11;
inline constexpr std::uint8_t kUwbFinal = 0x12;

inline constexpr std::size_t kUwbHeaderSize = 12;
inline constexpr std::size_t kUwbMaxPayload = 64;

inline constexpr std::uint8_t kFlagSubscriber = 0x01;
inline constexpr std::uint8_t kFlagPublisher = 0x02;

namespace detail {
inline void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v & 0xff));
}
inline void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>(v >> 24));
    out.push_back(static_cast<std::uint8_t>((v >> 16) & 0xff));
    out.push_back(static_cast<std::uint8_t>((v >> 8) & 0xff));
    out.push_back(static_cast<std::uint8_t>(v & 0xff));
}
inline std::uint16_t get_u16(const std::uint8_t* p) {
    return static_cast<std::uint16_t>((p[0] << 8) | p[1]);
}
inline std::uint32_t get_u32(const std::uint8_t* p) {
    return (static_cast<std::uint32_t>(p[0]) << 24) | (static_cast<std::uint32_t>(p[1]) << 16) |
           (static_cast<std::uint32_t>(p[2]) << 8) | static_cast<std::uint32_t>(p[3]);
}
}  // namespace detail

struct OgmFrame {
    NodeId origin = 0;
    std::uint32_t seqno = 0;
    std::uint8_t tq = 0;
    std::uint8_t ttl = 0;
    bool gateway = false;

    bool operator==(const OgmFrame&) const = default;
};

inline std::vector<std::uint8_t> encode_ogm(const OgmFrame& f) {
    std::vector<std::uint8_t> out;
    out.reserve(10);
    out.push_back(kOgmType);
    detail::put_u16(out, f.origin);
    detail::put_u32(out, f.seqno);
    out.push_back(f.tq);
    out.push_back(f.ttl);
    out.push_back(f.gateway ? 1 : 0);
    return out;
}

inline std::optional<OgmFrame> decode_ogm(const std::vector<std::uint8_t>& b) {
    if (b.size() != 10 || b[0] != kOgmType) return std::nullopt;
    if (b[9] > 1) return std::nullopt;
    OgmFrame f;
    f.origin = detail::get_u16(&b[1]);
    f.seqno = detail::get_u32(&b[3]);
    f.tq = b[7];
    f.ttl = b[8];
    f.gateway = b[9] != 0;
    return f;
}

struct AnnounceEntry {
    std::uint16_t topic_id = 0;
    std::uint8_t flags = 0;  // kFlagSubscriber | kFlagPublisher

    bool operator==(const AnnounceEntry&) const = default;
};

struct AnnounceFrame {
    NodeId node = 0;
    std::vector<AnnounceEntry> entries;

    bool operator==(const AnnounceFrame&) const = default;
};

inline std::vector<std::uint8_t> encode_announce(const AnnounceFrame& f) {
    std::vector<std::uint8_t> out;
    out.reserve(4 + 3 * f.entries.size());
    out.push_back(kAnnounceType);
    detail::put_u16(out, f.node);
    out.push_back(static_cast<std::uint8_t>(f.entries.size()));
    for (const auto& e : f.entries) {
        detail::put_u16(out, e.topic_id);
        out.push_back(e.flags);
    }
    return out;
}

inline std::optional<AnnounceFrame> decode_announce(const std::vector<std::uint8_t>& b) {
    if (b.size() < 4 || b[0] != kAnnounceType) return std::nullopt;
    std::size_t n = b[3];
    if (b.size() != 4 + 3 * n) return std::nullopt;
    AnnounceFrame f;
    f.node = detail::get_u16(&b[1]);
    f.entries.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        f.entries[i].topic_id = detail::get_u16(&b[4 + 3 * i]);
        f.entries[i].flags = b[6 + 3 * i];
    }
    return f;
}

struct UwbFrame {
    std::uint8_t type = kUwbPoll;
    NodeId src = 0;
    NodeId dst = 0;
    std::uint32_t session = 0;
    std::uint16_t topic_id = 0;  // 0 when no payload
    std::vector<std::uint8_t> payload;

    bool operator==(const UwbFrame&) const = default;
};

inline std::vector<std::uint8_t> encode_uwb(const UwbFrame& f) {
    std::vector<std::uint8_t> out;
    out.reserve(kUwbHeaderSize + f.payload.size());
    out.push_back(f.type);
    detail::put_u16(out, f.src);
    detail::put_u16(out, f.dst);
    detail::put_u32(out, f.session);
    out.push_back(static_cast<std::uint8_t>(f.payload.size()));
    detail::put_u16(out, f.topic_id);
    out.insert(out.end(), f.payload.begin(), f.payload.end());
    return out;
}

inline std::optional<UwbFrame> decode_uwb(const std::vector<std::uint8_t>& b) {
    if (b.size() < kUwbHeaderSize) return std::nullopt;
    if (b[0] != kUwbPoll && b[0] != kUwbResponse && b[0] != kUwbFinal) return std::nullopt;
    std::size_t plen = b[9];
    if (plen > kUwbMaxPayload || b.size() != kUwbHeaderSize + plen) return std::nullopt;
    UwbFrame f;
    f.type = b[0];
    f.src = detail::get_u16(&b[1]);
    f.dst = detail::get_u16(&b[3]);
    f.session = detail::get_u32(&b[5]);
    f.topic_id = detail::get_u16(&b[10]);
    f.payload.assign(b.begin() + kUwbHeaderSize, b.end());
    return f;
}

}  // namespace meshloc::wire
