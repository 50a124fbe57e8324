// Shared helpers for the test suites: scratch directories, hand-built note
// matrices, and seeded random melody generators.

#pragma once

#include <cstdlib>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "cantus/note_matrix.hpp"

namespace testfix {

/// Scratch directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    std::string pattern =
        (std::filesystem::temp_directory_path() / "cantus_test_XXXXXX").string();
    std::vector<char> buf(pattern.begin(), pattern.end());
    buf.push_back('\0');
    if (!mkdtemp(buf.data())) throw std::runtime_error("mkdtemp failed");
    path_ = buf.data();
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path file(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

struct SimpleNote {
  double onset = 0.0;
  double duration = 1.0;
  int pitch = 60;
};

/// Hand-built matrix at the default 120 BPM map: one beat = 0.5 s.
inline cantus::NoteMatrix make_matrix(const std::vector<SimpleNote>& notes,
                                      bool monophonic = false) {
  cantus::NoteMatrix nm;
  nm.source_id = "test";
  nm.monophonic = monophonic;
  for (const SimpleNote& n : notes) {
    cantus::Note note;
    note.onset_beats = n.onset;
    note.duration_beats = n.duration;
    note.pitch = static_cast<uint8_t>(n.pitch);
    note.velocity = 96;
    note.onset_sec = n.onset * 0.5;
    note.duration_sec = n.duration * 0.5;
    nm.notes.push_back(note);
  }
  cantus::detail::sort_notes(nm.notes);
  return nm;
}

/// Random melody with pitches in [low, high], back-to-back quarter-ish notes.
inline cantus::NoteMatrix random_melody(std::mt19937& rng, size_t length,
                                        int low = 48, int high = 84) {
  std::uniform_int_distribution<int> pitch_dist(low, high);
  std::uniform_real_distribution<double> dur_dist(0.25, 2.0);
  std::vector<SimpleNote> notes;
  double onset = 0.0;
  for (size_t i = 0; i < length; ++i) {
    double duration = dur_dist(rng);
    notes.push_back({onset, duration, pitch_dist(rng)});
    onset += duration;
  }
  return make_matrix(notes, /*monophonic=*/true);
}

/// Random note set with overlaps and coinciding onsets, for monophony tests.
inline cantus::NoteMatrix random_overlapping_notes(std::mt19937& rng, size_t length) {
  std::uniform_int_distribution<int> pitch_dist(36, 96);
  std::uniform_real_distribution<double> onset_dist(0.0, 32.0);
  std::uniform_real_distribution<double> dur_dist(0.1, 8.0);
  std::uniform_int_distribution<int> coincide(0, 3);
  std::vector<SimpleNote> notes;
  double last_onset = 0.0;
  for (size_t i = 0; i < length; ++i) {
    double onset = coincide(rng) == 0 && i > 0 ? last_onset : onset_dist(rng);
    notes.push_back({onset, dur_dist(rng), pitch_dist(rng)});
    last_onset = onset;
  }
  return make_matrix(notes);
}

}  // namespace testfix
