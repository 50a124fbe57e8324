// Note-matrix construction: pair note-on/note-off events into rows with
// beat and second timing, select the vocal voice, and enforce the
// non-overlapping monophony the downstream features require.

#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <cstdio>
#include <deque>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cantus/error.hpp"
#include "cantus/smf.hpp"

namespace cantus {

/// Onset-coincidence and zero-duration threshold, in beats. Far below any
/// musical resolution, above floating-point noise.
inline constexpr double kOnsetEpsilonBeats = 1e-9;

/// One row of the seven-column note matrix.
struct Note {
  double onset_beats = 0.0;
  double duration_beats = 0.0;  // > 0; zero-length notes are dropped
  uint8_t channel = 0;          // 0-15
  uint8_t pitch = 0;            // MIDI note number, semitone units
  uint8_t velocity = 0;         // 1-127
  double onset_sec = 0.0;
  double duration_sec = 0.0;    // > 0, consistent with the tempo map
};

/// Ordered note list plus the tempo context needed to keep the beat and
/// second domains consistent through later edits.
struct NoteMatrix {
  std::vector<Note> notes;  // ordered by (onset_beats, pitch)
  std::string source_id;
  bool monophonic = false;  // set by enforce_monophony
  int ticks_per_quarter = 480;
  TempoMap tempo{{TempoChange{0, kDefaultTempoUspq}}};
  std::vector<std::string> warnings;
};

/// Voice selection criteria; a machine-usable stand-in for picking the vocal
/// line by hand. At least one criterion must be set, or use all().
struct VoiceSelector {
  std::optional<int> track;
  std::optional<int> channel;
  std::optional<std::string> name_pattern;  // case-insensitive substring
  bool match_all = false;

  static VoiceSelector all() {
    VoiceSelector s;
    s.match_all = true;
    return s;
  }
  bool has_criterion() const {
    return track.has_value() || channel.has_value() || name_pattern.has_value();
  }
};

enum class MonoPolicy { KeepHigher, KeepLower, KeepFirst };

struct MatrixSummary {
  size_t note_count = 0;
  double total_duration_beats = 0.0;
  uint8_t pitch_min = 0;
  uint8_t pitch_max = 0;
};

namespace detail {

inline bool contains_case_insensitive(const std::string& haystack,
                                      const std::string& needle) {
  if (needle.empty()) return true;
  auto lower_eq = [](char a, char b) {
    return std::tolower(static_cast<unsigned char>(a)) ==
           std::tolower(static_cast<unsigned char>(b));
  };
  return std::search(haystack.begin(), haystack.end(), needle.begin(),
                     needle.end(), lower_eq) != haystack.end();
}

inline void sort_notes(std::vector<Note>& notes) {
  std::stable_sort(notes.begin(), notes.end(), [](const Note& a, const Note& b) {
    if (a.onset_beats != b.onset_beats) return a.onset_beats < b.onset_beats;
    return a.pitch < b.pitch;
  });
}

}  // namespace detail

/// Pair note-ons with their note-offs and emit note-matrix rows. A note-on
/// with velocity 0 ends a note. Pairing is first-on/first-off per channel and
/// pitch within one track. Orphaned note-ons are closed at the final event
/// tick; orphaned note-offs are dropped; both leave warning records.
inline NoteMatrix events_to_notes(const SmfDocument& doc,
                                  const VoiceSelector& selector,
                                  std::string source_id = {}) {
  if (!selector.match_all && !selector.has_criterion()) {
    throw Error(errc::invalid_field,
                "voice selector has no criterion; use VoiceSelector::all() to "
                "select every voice");
  }

  NoteMatrix nm;
  nm.source_id = std::move(source_id);
  nm.ticks_per_quarter = doc.ticks_per_quarter;
  nm.tempo = build_tempo_map(doc);
  nm.warnings = doc.warnings;

  for (const Track& track : doc.tracks) {
    if (selector.track && *selector.track != track.index) continue;
    if (selector.name_pattern &&
        !(track.name &&
          detail::contains_case_insensitive(*track.name, *selector.name_pattern))) {
      continue;
    }

    struct OpenNote {
      uint64_t tick;
      uint8_t velocity;
    };
    std::map<std::pair<uint8_t, uint8_t>, std::deque<OpenNote>> open;
    const uint64_t final_tick =
        track.events.empty() ? 0 : track.events.back().tick;

    auto emit = [&](uint8_t channel, uint8_t pitch, const OpenNote& start,
                    uint64_t off_tick) {
      if (off_tick <= start.tick) {
        nm.warnings.push_back("track " + std::to_string(track.index) +
                              ": zero-length note (pitch " +
                              std::to_string(pitch) + ") at tick " +
                              std::to_string(start.tick) + " dropped");
        return;
      }
      Note note;
      note.onset_beats = tick_to_beats(start.tick, doc.ticks_per_quarter);
      note.duration_beats =
          tick_to_beats(off_tick - start.tick, doc.ticks_per_quarter);
      note.channel = channel;
      note.pitch = pitch;
      note.velocity = start.velocity;
      note.onset_sec = tick_to_seconds(start.tick, doc.ticks_per_quarter, nm.tempo);
      note.duration_sec =
          tick_to_seconds(off_tick, doc.ticks_per_quarter, nm.tempo) - note.onset_sec;
      nm.notes.push_back(note);
    };

    auto handle_off = [&](uint8_t channel, uint8_t pitch, uint64_t tick) {
      auto it = open.find({channel, pitch});
      if (it == open.end() || it->second.empty()) {
        nm.warnings.push_back("track " + std::to_string(track.index) +
                              ": orphan note-off (pitch " + std::to_string(pitch) +
                              ") at tick " + std::to_string(tick) + " dropped");
        return;
      }
      OpenNote start = it->second.front();
      it->second.pop_front();
      emit(channel, pitch, start, tick);
    };

    for (const TimedEvent& ev : track.events) {
      if (const auto* on = std::get_if<NoteOnEvent>(&ev.kind)) {
        if (selector.channel && *selector.channel != on->channel) continue;
        if (on->velocity == 0) {
          handle_off(on->channel, on->pitch, ev.tick);
          continue;
        }
        auto& queue = open[{on->channel, on->pitch}];
        if (!queue.empty()) {
          nm.warnings.push_back("track " + std::to_string(track.index) +
                                ": overlapping note-ons for pitch " +
                                std::to_string(on->pitch) +
                                "; pairing first-on/first-off");
        }
        queue.push_back({ev.tick, on->velocity});
      } else if (const auto* off = std::get_if<NoteOffEvent>(&ev.kind)) {
        if (selector.channel && *selector.channel != off->channel) continue;
        handle_off(off->channel, off->pitch, ev.tick);
      }
    }

    for (const auto& [key, queue] : open) {
      for (const OpenNote& start : queue) {
        nm.warnings.push_back("track " + std::to_string(track.index) +
                              ": note-on (pitch " + std::to_string(key.second) +
                              ") at tick " + std::to_string(start.tick) +
                              " never ended; closed at end of track");
        emit(key.first, key.second, start, final_tick);
      }
    }
  }

  detail::sort_notes(nm.notes);
  if (nm.notes.empty()) {
    throw Error(errc::empty_voice, "voice selection produced no notes");
  }
  return nm;
}

/// Resolve coinciding onsets to one survivor per policy, then trim each note
/// that overlaps its successor (the legato adjustment). Trimming happens in
/// beats; seconds are recomputed from the tempo map so both domains stay
/// tempo-consistent. Idempotent.
inline NoteMatrix enforce_monophony(const NoteMatrix& nm,
                                    MonoPolicy policy = MonoPolicy::KeepHigher) {
  if (nm.notes.empty()) {
    throw Error(errc::empty_voice, "cannot enforce monophony on an empty matrix");
  }

  std::vector<Note> sorted = nm.notes;
  detail::sort_notes(sorted);

  // One survivor per group of onsets that coincide within epsilon.
  std::vector<Note> survivors;
  size_t i = 0;
  while (i < sorted.size()) {
    size_t j = i + 1;
    while (j < sorted.size() &&
           sorted[j].onset_beats - sorted[j - 1].onset_beats <= kOnsetEpsilonBeats) {
      ++j;
    }
    size_t pick = i;
    for (size_t k = i + 1; k < j; ++k) {
      if (policy == MonoPolicy::KeepHigher && sorted[k].pitch > sorted[pick].pitch) {
        pick = k;
      } else if (policy == MonoPolicy::KeepLower &&
                 sorted[k].pitch < sorted[pick].pitch) {
        pick = k;
      }
      // KeepFirst: the first row of the group in matrix order stays.
    }
    survivors.push_back(sorted[pick]);
    i = j;
  }

  // Legato trim; only genuine overlap beyond epsilon triggers an edit.
  for (size_t k = 0; k + 1 < survivors.size(); ++k) {
    Note& cur = survivors[k];
    const Note& next = survivors[k + 1];
    if (cur.onset_beats + cur.duration_beats > next.onset_beats + kOnsetEpsilonBeats) {
      cur.duration_beats = next.onset_beats - cur.onset_beats;
      cur.duration_sec =
          beats_to_seconds(next.onset_beats, nm.ticks_per_quarter, nm.tempo) -
          beats_to_seconds(cur.onset_beats, nm.ticks_per_quarter, nm.tempo);
    }
  }

  NoteMatrix out = nm;
  out.notes.clear();
  for (const Note& note : survivors) {
    if (note.duration_beats > kOnsetEpsilonBeats) out.notes.push_back(note);
  }
  if (out.notes.empty()) {
    throw Error(errc::empty_voice, "all notes dropped while enforcing monophony");
  }
  out.monophonic = true;
  return out;
}

inline MatrixSummary matrix_summary(const NoteMatrix& nm) {
  if (nm.notes.empty()) {
    throw Error(errc::empty_voice, "summary of an empty matrix");
  }
  MatrixSummary s;
  s.note_count = nm.notes.size();
  s.pitch_min = 127;
  s.pitch_max = 0;
  for (const Note& note : nm.notes) {
    s.total_duration_beats += note.duration_beats;
    s.pitch_min = std::min(s.pitch_min, note.pitch);
    s.pitch_max = std::max(s.pitch_max, note.pitch);
  }
  return s;
}

/// Debug dump mirroring the classic seven-column nmat layout.
inline std::string matrix_to_csv(const NoteMatrix& nm) {
  std::string out =
      "onset_beats,duration_beats,channel,pitch,velocity,onset_sec,duration_sec\n";
  char row[160];
  for (const Note& n : nm.notes) {
    std::snprintf(row, sizeof row, "%.6f,%.6f,%d,%d,%d,%.6f,%.6f\n",
                  n.onset_beats, n.duration_beats, n.channel, n.pitch, n.velocity,
                  n.onset_sec, n.duration_sec);
    out += row;
  }
  return out;
}

}  // namespace cantus
