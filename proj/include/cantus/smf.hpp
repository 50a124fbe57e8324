// Standard MIDI File decoding: chunk walking, variable-length quantities,
// running status, and the tempo map that turns ticks into wall time.
//
// Only formats 0 and 1 with pulses-per-quarter divisions are accepted;
// format 2 and SMPTE divisions are rejected outright rather than being
// silently misread. Unknown meta and sysex events are preserved opaquely.

#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "cantus/error.hpp"

namespace cantus {

enum class SmfFormat { Single, MultiTrack };  // SMF formats 0 and 1

struct NoteOnEvent {
  uint8_t channel = 0;  // 0-15
  uint8_t pitch = 0;    // 0-127
  uint8_t velocity = 0; // 0-127; velocity 0 is preserved as written here
};

struct NoteOffEvent {
  uint8_t channel = 0;
  uint8_t pitch = 0;
  uint8_t velocity = 0;
};

struct TempoEvent {
  uint32_t microseconds_per_quarter = 0;  // always > 0 after parsing
};

struct TrackNameEvent {
  std::string text;
};

struct EndOfTrackEvent {};

/// Anything we do not interpret: unknown meta events (status 0xff, payload
/// starts with the meta type byte), sysex (0xf0/0xf7), and other channel or
/// system messages. Kept verbatim so nothing in a file is ever fatal or lost.
struct OtherEvent {
  uint8_t status = 0;
  std::vector<uint8_t> payload;
};

using EventKind = std::variant<NoteOnEvent, NoteOffEvent, TempoEvent,
                               TrackNameEvent, EndOfTrackEvent, OtherEvent>;

struct TimedEvent {
  uint64_t tick = 0;  // absolute; cumulative sum of delta times
  EventKind kind;
};

struct Track {
  int index = 0;
  std::optional<std::string> name;  // first track-name meta event, if any
  std::vector<TimedEvent> events;   // non-decreasing tick; last is end-of-track
};

struct SmfDocument {
  SmfFormat format = SmfFormat::Single;
  int ticks_per_quarter = 0;  // >= 1; SMPTE divisions never reach here
  std::vector<Track> tracks;
  std::vector<std::string> warnings;  // non-fatal oddities found while decoding
};

inline constexpr uint32_t kDefaultTempoUspq = 500000;  // 120 BPM
inline constexpr uint32_t kMaxVlqValue = 0x0fffffff;

struct TempoChange {
  uint64_t tick = 0;
  uint32_t microseconds_per_quarter = kDefaultTempoUspq;
};

/// Ordered tempo changes, strictly increasing in tick, first entry at tick 0.
struct TempoMap {
  std::vector<TempoChange> changes;
};

struct VlqResult {
  uint32_t value = 0;
  size_t bytes_consumed = 0;  // 1..4
};

/// Decode one variable-length quantity at `offset`: big-endian 7-bit groups,
/// continuation bit 0x80 on all but the last byte.
inline VlqResult parse_vlq(std::span<const uint8_t> bytes, size_t offset) {
  if (offset >= bytes.size()) {
    throw Error(errc::malformed_vlq,
                "variable-length quantity starts past end of input at byte " +
                    std::to_string(offset),
                offset);
  }
  uint32_t value = 0;
  for (size_t i = 0; i < 4; ++i) {
    if (offset + i >= bytes.size()) {
      throw Error(errc::malformed_vlq,
                  "input ends inside a variable-length quantity at byte " +
                      std::to_string(offset + i),
                  offset + i);
    }
    uint8_t b = bytes[offset + i];
    value = (value << 7) | (b & 0x7fu);
    if ((b & 0x80u) == 0) return {value, i + 1};
  }
  throw Error(errc::malformed_vlq,
              "variable-length quantity longer than 4 bytes at byte " +
                  std::to_string(offset),
              offset);
}

namespace detail {

/// Bounds-checked cursor over a byte range. Offsets stay absolute within the
/// whole file so error messages point at the real location.
class ByteReader {
 public:
  ByteReader(std::span<const uint8_t> bytes, size_t begin, size_t end)
      : bytes_(bytes), offset_(begin), end_(end) {}
  explicit ByteReader(std::span<const uint8_t> bytes)
      : ByteReader(bytes, 0, bytes.size()) {}

  size_t offset() const { return offset_; }
  size_t remaining() const { return end_ - offset_; }
  bool at_end() const { return offset_ >= end_; }

  uint8_t peek() const {
    require(1);
    return bytes_[offset_];
  }
  uint8_t u8() {
    require(1);
    return bytes_[offset_++];
  }
  uint16_t u16be() {
    require(2);
    uint16_t v = static_cast<uint16_t>(bytes_[offset_] << 8 | bytes_[offset_ + 1]);
    offset_ += 2;
    return v;
  }
  uint32_t u32be() {
    require(4);
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v = v << 8 | bytes_[offset_ + i];
    offset_ += 4;
    return v;
  }
  std::array<char, 4> fourcc() {
    require(4);
    std::array<char, 4> id;
    for (int i = 0; i < 4; ++i) id[i] = static_cast<char>(bytes_[offset_ + i]);
    offset_ += 4;
    return id;
  }
  std::vector<uint8_t> take(size_t n) {
    require(n);
    std::vector<uint8_t> out(bytes_.begin() + offset_, bytes_.begin() + offset_ + n);
    offset_ += n;
    return out;
  }
  void skip(size_t n) {
    require(n);
    offset_ += n;
  }
  uint32_t vlq() {
    VlqResult r = parse_vlq(bytes_.first(end_), offset_);
    offset_ += r.bytes_consumed;
    return r.value;
  }

 private:
  void require(size_t n) const {
    if (remaining() < n) {
      throw Error(errc::truncated_file,
                  "unexpected end of data at byte " + std::to_string(offset_),
                  offset_);
    }
  }

  std::span<const uint8_t> bytes_;
  size_t offset_;
  size_t end_;
};

inline uint8_t data_byte(ByteReader& r) {
  size_t at = r.offset();
  uint8_t b = r.u8();
  if (b & 0x80u) {
    throw Error(errc::malformed_event,
                "expected a data byte, got status byte at byte " + std::to_string(at),
                at);
  }
  return b;
}

// Data-byte counts for system common messages 0xf1..0xf6.
inline size_t system_common_length(uint8_t status) {
  switch (status) {
    case 0xf1: return 1;
    case 0xf2: return 2;
    case 0xf3: return 1;
    default: return 0;
  }
}

inline Track parse_track_chunk(ByteReader& r, int index,
                               std::vector<std::string>& warnings) {
  Track track;
  track.index = index;
  uint64_t tick = 0;
  std::optional<uint8_t> running_status;
  bool ended = false;

  while (!r.at_end()) {
    tick += r.vlq();
    uint8_t status;
    if (r.peek() < 0x80) {
      if (!running_status) {
        throw Error(errc::running_status_without_prior,
                    "data byte with no running status to reuse at byte " +
                        std::to_string(r.offset()),
                    r.offset());
      }
      status = *running_status;
    } else {
      status = r.u8();
    }

    if (status < 0xf0) {
      // Channel message; running status keeps compressing these.
      running_status = status;
      uint8_t type = status & 0xf0u;
      uint8_t channel = status & 0x0fu;
      uint8_t d1 = data_byte(r);
      switch (type) {
        case 0x80: {
          uint8_t d2 = data_byte(r);
          track.events.push_back({tick, NoteOffEvent{channel, d1, d2}});
          break;
        }
        case 0x90: {
          uint8_t d2 = data_byte(r);
          track.events.push_back({tick, NoteOnEvent{channel, d1, d2}});
          break;
        }
        case 0xc0:
        case 0xd0:
          track.events.push_back({tick, OtherEvent{status, {d1}}});
          break;
        default: {
          uint8_t d2 = data_byte(r);
          track.events.push_back({tick, OtherEvent{status, {d1, d2}}});
          break;
        }
      }
    } else if (status == 0xff) {
      running_status.reset();
      size_t at = r.offset();
      uint8_t meta_type = r.u8();
      uint32_t length = r.vlq();
      std::vector<uint8_t> payload = r.take(length);
      if (meta_type == 0x2f) {
        track.events.push_back({tick, EndOfTrackEvent{}});
        ended = true;
        if (!r.at_end()) {
          warnings.push_back("track " + std::to_string(index) + ": skipping " +
                             std::to_string(r.remaining()) +
                             " byte(s) after end-of-track");
          r.skip(r.remaining());
        }
        break;
      } else if (meta_type == 0x51) {
        if (payload.size() != 3) {
          throw Error(errc::malformed_event,
                      "tempo meta event payload must be 3 bytes at byte " +
                          std::to_string(at),
                      at);
        }
        uint32_t uspq = static_cast<uint32_t>(payload[0]) << 16 |
                        static_cast<uint32_t>(payload[1]) << 8 | payload[2];
        if (uspq == 0) {
          throw Error(errc::malformed_event,
                      "tempo of zero microseconds per quarter at byte " +
                          std::to_string(at),
                      at);
        }
        track.events.push_back({tick, TempoEvent{uspq}});
      } else if (meta_type == 0x03) {
        std::string text(payload.begin(), payload.end());
        if (!track.name) track.name = text;
        track.events.push_back({tick, TrackNameEvent{std::move(text)}});
      } else {
        std::vector<uint8_t> raw;
        raw.reserve(payload.size() + 1);
        raw.push_back(meta_type);
        raw.insert(raw.end(), payload.begin(), payload.end());
        track.events.push_back({tick, OtherEvent{0xff, std::move(raw)}});
      }
    } else if (status == 0xf0 || status == 0xf7) {
      running_status.reset();
      uint32_t length = r.vlq();
      track.events.push_back({tick, OtherEvent{status, r.take(length)}});
    } else {
      // System common (cancels running status) or realtime (does not).
      if (status <= 0xf6) running_status.reset();
      std::vector<uint8_t> payload;
      for (size_t i = 0, n = system_common_length(status); i < n; ++i) {
        payload.push_back(data_byte(r));
      }
      track.events.push_back({tick, OtherEvent{status, std::move(payload)}});
    }
  }

  if (!ended) {
    warnings.push_back("track " + std::to_string(index) +
                       ": no end-of-track event; one was assumed");
    track.events.push_back({tick, EndOfTrackEvent{}});
  }
  return track;
}

inline bool fourcc_is(const std::array<char, 4>& id, const char* expected) {
  return std::equal(id.begin(), id.end(), expected);
}

inline std::string fourcc_printable(const std::array<char, 4>& id) {
  std::string out;
  for (char c : id) out += (c >= 0x20 && c < 0x7f) ? c : '?';
  return out;
}

}  // namespace detail

/// Decode a Standard MIDI File. Strict about the header, the declared track
/// count, and event encoding; lenient about content it does not understand.
inline SmfDocument parse_smf(std::span<const uint8_t> bytes) {
  detail::ByteReader r(bytes);
  if (r.remaining() < 8 || !detail::fourcc_is(r.fourcc(), "MThd")) {
    throw Error(errc::missing_header, "no MThd header chunk at byte 0", 0);
  }
  size_t len_at = r.offset();
  uint32_t header_length = r.u32be();
  if (header_length != 6) {
    throw Error(errc::missing_header,
                "MThd length must be 6, got " + std::to_string(header_length) +
                    " at byte " + std::to_string(len_at),
                len_at);
  }
  size_t format_at = r.offset();
  uint16_t format = r.u16be();
  uint16_t declared_tracks = r.u16be();
  size_t division_at = r.offset();
  uint16_t division = r.u16be();

  if (format > 1) {
    throw Error(errc::unsupported_format,
                "SMF format " + std::to_string(format) +
                    " is not supported (only 0 and 1) at byte " +
                    std::to_string(format_at),
                format_at);
  }
  if (division & 0x8000u) {
    throw Error(errc::unsupported_division,
                "SMPTE time division is not supported at byte " +
                    std::to_string(division_at),
                division_at);
  }
  if (division == 0) {
    throw Error(errc::unsupported_division,
                "time division of zero ticks per quarter at byte " +
                    std::to_string(division_at),
                division_at);
  }

  SmfDocument doc;
  doc.format = format == 0 ? SmfFormat::Single : SmfFormat::MultiTrack;
  doc.ticks_per_quarter = division;

  int found = 0;
  while (found < declared_tracks) {
    if (r.remaining() < 8) {
      throw Error(errc::truncated_file,
                  "expected " + std::to_string(declared_tracks - found) +
                      " more track chunk(s) at byte " + std::to_string(r.offset()),
                  r.offset());
    }
    auto id = r.fourcc();
    size_t len_offset = r.offset();
    uint32_t chunk_length = r.u32be();
    if (chunk_length > r.remaining()) {
      throw Error(errc::truncated_file,
                  "chunk length " + std::to_string(chunk_length) +
                      " exceeds remaining " + std::to_string(r.remaining()) +
                      " byte(s) at byte " + std::to_string(len_offset),
                  len_offset);
    }
    if (!detail::fourcc_is(id, "MTrk")) {
      doc.warnings.push_back("skipping unknown chunk '" +
                             detail::fourcc_printable(id) + "'");
      r.skip(chunk_length);
      continue;
    }
    detail::ByteReader chunk(bytes, r.offset(), r.offset() + chunk_length);
    doc.tracks.push_back(detail::parse_track_chunk(chunk, found, doc.warnings));
    r.skip(chunk_length);
    ++found;
  }
  if (r.remaining() > 0) {
    doc.warnings.push_back("ignoring " + std::to_string(r.remaining()) +
                           " trailing byte(s) after the last declared track");
  }
  return doc;
}

/// Collect tempo events from every track, merged by tick; a duplicate tick
/// keeps the change that appears later in file order. An implicit 120 BPM
/// entry is inserted at tick 0 when the file has no change there.
inline TempoMap build_tempo_map(const SmfDocument& doc) {
  std::vector<TempoChange> raw;
  for (const Track& track : doc.tracks) {
    for (const TimedEvent& ev : track.events) {
      if (const auto* tempo = std::get_if<TempoEvent>(&ev.kind)) {
        raw.push_back({ev.tick, tempo->microseconds_per_quarter});
      }
    }
  }
  std::stable_sort(raw.begin(), raw.end(),
                   [](const TempoChange& a, const TempoChange& b) {
                     return a.tick < b.tick;
                   });
  TempoMap map;
  for (const TempoChange& change : raw) {
    if (!map.changes.empty() && map.changes.back().tick == change.tick) {
      map.changes.back() = change;  // last writer wins
    } else {
      map.changes.push_back(change);
    }
  }
  if (map.changes.empty() || map.changes.front().tick != 0) {
    map.changes.insert(map.changes.begin(), {0, kDefaultTempoUspq});
  }
  return map;
}

inline double tick_to_beats(uint64_t tick, int ticks_per_quarter) {
  return static_cast<double>(tick) / ticks_per_quarter;
}

/// Piecewise integration over the tempo segments. Within one segment seconds
/// advance by beats × microseconds_per_quarter / 10^6, evaluated in exactly
/// that order so the single-segment case reduces to the closed form.
inline double tick_to_seconds(uint64_t tick, int ticks_per_quarter,
                              const TempoMap& map) {
  double seconds = 0.0;
  for (size_t i = 0; i < map.changes.size(); ++i) {
    uint64_t segment_begin = map.changes[i].tick;
    if (tick <= segment_begin) break;
    uint64_t segment_end =
        i + 1 < map.changes.size() ? map.changes[i + 1].tick : tick;
    uint64_t until = std::min(tick, segment_end);
    if (until > segment_begin) {
      seconds += tick_to_beats(until - segment_begin, ticks_per_quarter) *
                 map.changes[i].microseconds_per_quarter / 1e6;
    }
  }
  return seconds;
}

/// Same integration for a fractional position in the beat domain; used when a
/// note edited in beats needs its seconds recomputed against the tempo map.
inline double beats_to_seconds(double beats, int ticks_per_quarter,
                               const TempoMap& map) {
  double seconds = 0.0;
  for (size_t i = 0; i < map.changes.size(); ++i) {
    double segment_begin = tick_to_beats(map.changes[i].tick, ticks_per_quarter);
    if (beats <= segment_begin) break;
    double segment_end = i + 1 < map.changes.size()
                             ? tick_to_beats(map.changes[i + 1].tick, ticks_per_quarter)
                             : beats;
    double until = std::min(beats, segment_end);
    if (until > segment_begin) {
      seconds += (until - segment_begin) *
                 map.changes[i].microseconds_per_quarter / 1e6;
    }
  }
  return seconds;
}

}  // namespace cantus
