// The three melodic features: ambitus, normalized pitch-class entropy, and
// the signed interval distribution with its folded (unsigned) view, plus
// corpus-level aggregation of per-song interval profiles.

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>

#include "cantus/error.hpp"
#include "cantus/note_matrix.hpp"

namespace cantus {

struct AmbitusResult {
  int semitones = 0;  // highest_pitch - lowest_pitch
  uint8_t lowest_pitch = 0;
  uint8_t highest_pitch = 0;
};

enum class PcWeighting { DurationWeighted, CountWeighted };

/// 12-bin weight vector over pitch classes C=0 … B=11, normalized to sum 1.
struct PitchClassDistribution {
  std::array<double, 12> weights{};
  PcWeighting weighting_mode = PcWeighting::DurationWeighted;
};

/// Shannon entropy of the pitch-class distribution divided by log 12, so the
/// value is base-independent and lies in [0, 1].
struct EntropyResult {
  double normalized_entropy = 0.0;
};

enum class IntervalWeighting { CountWeighted, DurationWeighted };

/// 25-bin histogram of successive-note pitch differences, -12…+12 semitones.
/// Intervals beyond one octave are excluded from the bins (folding them in
/// would corrupt the octave bin) but counted in overflow_count. Bins are
/// normalized over the in-range weight mass; weight_total keeps that raw
/// mass so pooled aggregation can recover counts.
struct IntervalDistribution {
  std::array<double, 25> signed_bins{};  // index = interval + 12
  int64_t overflow_count = 0;
  int64_t interval_count = 0;
  double weight_total = 0.0;
};

/// 13-bin unsigned view P1(0) … P8(12); bin k sums the -k and +k signed bins.
struct FoldedIntervalView {
  std::array<double, 13> unsigned_bins{};
};

inline constexpr std::array<const char*, 13> kFoldedIntervalNames = {
    "P1", "m2", "M2", "m3", "M3", "P4", "TT", "P5", "m6", "M6", "m7", "M7", "P8"};

enum class AggregateMode { EqualSongWeight, Pooled };

inline AmbitusResult ambitus(const NoteMatrix& nm) {
  if (nm.notes.empty()) throw Error(errc::empty_voice, "ambitus of an empty matrix");
  uint8_t lo = 127, hi = 0;
  for (const Note& note : nm.notes) {
    lo = std::min(lo, note.pitch);
    hi = std::max(hi, note.pitch);
  }
  return {hi - lo, lo, hi};
}

inline PitchClassDistribution pc_distribution(
    const NoteMatrix& nm, PcWeighting mode = PcWeighting::DurationWeighted) {
  if (nm.notes.empty()) {
    throw Error(errc::empty_voice, "pitch-class distribution of an empty matrix");
  }
  PitchClassDistribution pcd;
  pcd.weighting_mode = mode;
  for (const Note& note : nm.notes) {
    pcd.weights[note.pitch % 12] +=
        mode == PcWeighting::DurationWeighted ? note.duration_beats : 1.0;
  }
  double total = std::accumulate(pcd.weights.begin(), pcd.weights.end(), 0.0);
  for (double& w : pcd.weights) w /= total;
  return pcd;
}

inline EntropyResult pitch_class_entropy(const PitchClassDistribution& pcd) {
  double h = 0.0;
  for (double p : pcd.weights) {
    if (p > 0.0) h -= p * std::log(p);  // 0 log 0 := 0
  }
  double normalized = h / std::log(12.0);
  return {std::clamp(normalized, 0.0, 1.0)};
}

/// Count mode weighs every successive pair as 1; duration mode weighs a pair
/// by the geometric mean of the two note durations.
inline IntervalDistribution interval_distribution(
    const NoteMatrix& nm, IntervalWeighting weighting = IntervalWeighting::CountWeighted) {
  if (nm.notes.empty()) {
    throw Error(errc::empty_voice, "interval distribution of an empty matrix");
  }
  if (!nm.monophonic) {
    throw Error(errc::not_monophonic,
                "interval distribution requires a monophonic matrix; run "
                "enforce_monophony first");
  }
  IntervalDistribution iv;
  for (size_t i = 0; i + 1 < nm.notes.size(); ++i) {
    const Note& cur = nm.notes[i];
    const Note& next = nm.notes[i + 1];
    int delta = static_cast<int>(next.pitch) - static_cast<int>(cur.pitch);
    ++iv.interval_count;
    if (delta < -12 || delta > 12) {
      ++iv.overflow_count;
      continue;
    }
    double weight = weighting == IntervalWeighting::CountWeighted
                        ? 1.0
                        : std::sqrt(cur.duration_beats * next.duration_beats);
    iv.signed_bins[static_cast<size_t>(delta + 12)] += weight;
    iv.weight_total += weight;
  }
  if (iv.weight_total > 0.0) {
    for (double& bin : iv.signed_bins) bin /= iv.weight_total;
  }
  return iv;
}

inline FoldedIntervalView fold_intervals(const IntervalDistribution& iv) {
  FoldedIntervalView folded;
  folded.unsigned_bins[0] = iv.signed_bins[12];
  for (size_t k = 1; k <= 12; ++k) {
    folded.unsigned_bins[k] = iv.signed_bins[12 - k] + iv.signed_bins[12 + k];
  }
  return folded;
}

/// EqualSongWeight averages the normalized per-song vectors and renormalizes
/// (songs with no in-range intervals contribute zeros); Pooled rebuilds raw
/// masses, sums them, and normalizes, so long songs dominate.
inline IntervalDistribution aggregate_interval_distribution(
    std::span<const IntervalDistribution> per_song,
    AggregateMode mode = AggregateMode::EqualSongWeight) {
  if (per_song.empty()) {
    throw Error(errc::empty_input, "aggregate of an empty distribution list");
  }
  IntervalDistribution agg;
  for (const IntervalDistribution& iv : per_song) {
    agg.interval_count += iv.interval_count;
    agg.overflow_count += iv.overflow_count;
    agg.weight_total += iv.weight_total;
  }
  if (mode == AggregateMode::EqualSongWeight) {
    for (const IntervalDistribution& iv : per_song) {
      for (size_t k = 0; k < agg.signed_bins.size(); ++k) {
        agg.signed_bins[k] += iv.signed_bins[k];
      }
    }
  } else {
    for (const IntervalDistribution& iv : per_song) {
      for (size_t k = 0; k < agg.signed_bins.size(); ++k) {
        agg.signed_bins[k] += iv.signed_bins[k] * iv.weight_total;
      }
    }
  }
  double sum = std::accumulate(agg.signed_bins.begin(), agg.signed_bins.end(), 0.0);
  if (sum > 0.0) {
    for (double& bin : agg.signed_bins) bin /= sum;
  }
  return agg;
}

}  // namespace cantus
