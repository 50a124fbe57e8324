// Test-only byte-level Standard MIDI File writer, written independently of
// the parser so round-trips check two separate implementations against each
// other. Also hosts the independent VLQ encoder oracle.

#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace testfix {

using Bytes = std::vector<uint8_t>;

/// Independent VLQ encoder: builds the 7-bit groups low-to-high and emits
/// them reversed, unlike the parser's accumulate-and-shift decoder.
inline Bytes encode_vlq(uint32_t value) {
  if (value > 0x0fffffff) throw std::invalid_argument("vlq value too large");
  uint8_t groups[4];
  int count = 0;
  do {
    groups[count++] = static_cast<uint8_t>(value & 0x7f);
    value >>= 7;
  } while (value != 0);
  Bytes out;
  for (int i = count - 1; i >= 0; --i) {
    uint8_t b = groups[i];
    if (i != 0) b |= 0x80;
    out.push_back(b);
  }
  return out;
}

inline void append(Bytes& out, const Bytes& more) {
  out.insert(out.end(), more.begin(), more.end());
}

inline void append_u16be(Bytes& out, uint16_t v) {
  out.push_back(static_cast<uint8_t>(v >> 8));
  out.push_back(static_cast<uint8_t>(v & 0xff));
}

inline void append_u32be(Bytes& out, uint32_t v) {
  out.push_back(static_cast<uint8_t>(v >> 24));
  out.push_back(static_cast<uint8_t>(v >> 16 & 0xff));
  out.push_back(static_cast<uint8_t>(v >> 8 & 0xff));
  out.push_back(static_cast<uint8_t>(v & 0xff));
}

/// Builds the body of one MTrk chunk event by event.
class TrackBuilder {
 public:
  TrackBuilder& note_on(uint32_t delta, int channel, int pitch, int velocity) {
    append(bytes_, encode_vlq(delta));
    bytes_.push_back(static_cast<uint8_t>(0x90 | channel));
    bytes_.push_back(static_cast<uint8_t>(pitch));
    bytes_.push_back(static_cast<uint8_t>(velocity));
    return *this;
  }
  TrackBuilder& note_off(uint32_t delta, int channel, int pitch, int velocity = 64) {
    append(bytes_, encode_vlq(delta));
    bytes_.push_back(static_cast<uint8_t>(0x80 | channel));
    bytes_.push_back(static_cast<uint8_t>(pitch));
    bytes_.push_back(static_cast<uint8_t>(velocity));
    return *this;
  }
  /// Channel-message data bytes only; exercises running status in readers.
  TrackBuilder& running_data(uint32_t delta, int d1, int d2) {
    append(bytes_, encode_vlq(delta));
    bytes_.push_back(static_cast<uint8_t>(d1));
    bytes_.push_back(static_cast<uint8_t>(d2));
    return *this;
  }
  TrackBuilder& tempo(uint32_t delta, uint32_t microseconds_per_quarter) {
    append(bytes_, encode_vlq(delta));
    bytes_.push_back(0xff);
    bytes_.push_back(0x51);
    bytes_.push_back(0x03);
    bytes_.push_back(static_cast<uint8_t>(microseconds_per_quarter >> 16 & 0xff));
    bytes_.push_back(static_cast<uint8_t>(microseconds_per_quarter >> 8 & 0xff));
    bytes_.push_back(static_cast<uint8_t>(microseconds_per_quarter & 0xff));
    return *this;
  }
  TrackBuilder& track_name(uint32_t delta, std::string_view name) {
    return meta(delta, 0x03, Bytes(name.begin(), name.end()));
  }
  TrackBuilder& meta(uint32_t delta, uint8_t type, const Bytes& payload) {
    append(bytes_, encode_vlq(delta));
    bytes_.push_back(0xff);
    bytes_.push_back(type);
    append(bytes_, encode_vlq(static_cast<uint32_t>(payload.size())));
    append(bytes_, payload);
    return *this;
  }
  TrackBuilder& sysex(uint32_t delta, const Bytes& payload) {
    append(bytes_, encode_vlq(delta));
    bytes_.push_back(0xf0);
    append(bytes_, encode_vlq(static_cast<uint32_t>(payload.size())));
    append(bytes_, payload);
    return *this;
  }
  /// Escape hatch for malformed fixtures.
  TrackBuilder& raw(const Bytes& bytes) {
    append(bytes_, bytes);
    return *this;
  }
  Bytes finish(uint32_t eot_delta = 0) const {
    Bytes out = bytes_;
    append(out, encode_vlq(eot_delta));
    out.push_back(0xff);
    out.push_back(0x2f);
    out.push_back(0x00);
    return out;
  }
  Bytes finish_without_end_of_track() const { return bytes_; }

 private:
  Bytes bytes_;
};

/// Wrap finished track bodies in MThd/MTrk chunks.
inline Bytes build_smf(int format, int division, const std::vector<Bytes>& tracks) {
  Bytes out;
  out.insert(out.end(), {'M', 'T', 'h', 'd'});
  append_u32be(out, 6);
  append_u16be(out, static_cast<uint16_t>(format));
  append_u16be(out, static_cast<uint16_t>(tracks.size()));
  append_u16be(out, static_cast<uint16_t>(division));
  for (const Bytes& body : tracks) {
    out.insert(out.end(), {'M', 'T', 'r', 'k'});
    append_u32be(out, static_cast<uint32_t>(body.size()));
    append(out, body);
  }
  return out;
}

struct MelodyNote {
  int pitch = 60;
  uint32_t duration_ticks = 96;
};

/// A format-0 file holding one monophonic melody of back-to-back notes.
inline Bytes build_melody_smf(const std::vector<MelodyNote>& melody,
                              int division = 96, int channel = 0,
                              std::string_view track_name = {},
                              uint32_t tempo_uspq = 0) {
  TrackBuilder track;
  if (!track_name.empty()) track.track_name(0, track_name);
  if (tempo_uspq != 0) track.tempo(0, tempo_uspq);
  for (const MelodyNote& note : melody) {
    track.note_on(0, channel, note.pitch, 96);
    track.note_off(note.duration_ticks, channel, note.pitch);
  }
  return build_smf(0, division, {track.finish()});
}

inline void write_file(const std::filesystem::path& path, const Bytes& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write fixture file: " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
}

}  // namespace testfix
