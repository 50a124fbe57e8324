// Corpus driver: run the per-song pipeline (parse, select voice, enforce
// monophony, extract features) over a manifest, then assemble means, the
// aggregate interval profile, and feature-vs-plays correlations.
//
// Per-song failures are isolated: a malformed file becomes an error record
// in the report, never the end of the run.

#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "cantus/error.hpp"
#include "cantus/features.hpp"
#include "cantus/manifest.hpp"
#include "cantus/note_matrix.hpp"
#include "cantus/smf.hpp"
#include "cantus/stats.hpp"

namespace cantus {

/// Effective configuration of one analysis run; snapshotted into the report.
struct AnalysisConfig {
  PcWeighting pc_weighting = PcWeighting::DurationWeighted;
  IntervalWeighting iv_weighting = IntervalWeighting::CountWeighted;
  MonoPolicy mono_policy = MonoPolicy::KeepHigher;
  AggregateMode aggregate_mode = AggregateMode::EqualSongWeight;
};

struct SongFeatures {
  AmbitusResult ambitus;
  EntropyResult entropy;
  IntervalDistribution intervals;
  size_t note_count = 0;  // notes in the monophonic melody
};

/// Outcome for one manifest entry: features on success, an error record
/// otherwise; warnings survive either way.
struct SongRecord {
  ManifestEntry entry;
  std::optional<SongFeatures> features;
  std::optional<std::string> error;
  std::vector<std::string> warnings;
};

struct CorrelationEntry {
  std::string feature;  // "ambitus" or "entropy"
  CorrelationResult result;
};

struct CorpusReport {
  std::vector<SongRecord> songs;  // manifest order
  double mean_ambitus = 0.0;
  double mean_entropy = 0.0;
  IntervalDistribution aggregate_intervals;
  FoldedIntervalView aggregate_folded;
  std::vector<CorrelationEntry> correlations;
  std::vector<std::string> notices;  // e.g. why a correlation was skipped
  AnalysisConfig config;
};

inline std::vector<uint8_t> read_binary_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(errc::io_failure, "cannot open file: " + path.string());
  }
  std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                             std::istreambuf_iterator<char>());
  return bytes;
}

inline VoiceSelector selector_for(const ManifestEntry& entry) {
  VoiceSelector selector;
  selector.track = entry.track;
  selector.channel = entry.channel;
  selector.name_pattern = entry.name_pattern;
  if (!selector.has_criterion()) selector.match_all = true;
  return selector;
}

/// The per-song pipeline on an already-parsed document.
inline SongFeatures extract_song_features(const SmfDocument& doc,
                                          const VoiceSelector& selector,
                                          const AnalysisConfig& config,
                                          std::vector<std::string>* warnings = nullptr,
                                          std::string source_id = {}) {
  NoteMatrix raw = events_to_notes(doc, selector, std::move(source_id));
  NoteMatrix mono = enforce_monophony(raw, config.mono_policy);
  SongFeatures features;
  features.ambitus = ambitus(mono);
  features.entropy = pitch_class_entropy(pc_distribution(mono, config.pc_weighting));
  features.intervals = interval_distribution(mono, config.iv_weighting);
  features.note_count = mono.notes.size();
  if (warnings) *warnings = mono.warnings;
  return features;
}

namespace detail {

inline void add_correlation(CorpusReport& report, const std::string& feature_name,
                            const std::vector<double>& feature_values,
                            const std::vector<double>& plays_values) {
  const size_t n = feature_values.size();
  if (n < 3) {
    report.notices.push_back(
        "correlation of " + feature_name + " vs plays skipped: only " +
        std::to_string(n) + " song(s) have both a feature value and a play count");
    return;
  }
  try {
    CorrelationResult result = correlate(Sample{feature_values, feature_name},
                                         Sample{plays_values, "plays"});
    report.correlations.push_back({feature_name, result});
  } catch (const Error& e) {
    report.notices.push_back("correlation of " + feature_name +
                             " vs plays skipped: " + describe(e));
  }
}

}  // namespace detail

/// Analyze every manifest entry. Only total failure is fatal; the report
/// carries per-song error records otherwise. Correlations are computed over
/// the pairwise-complete subset (feature extracted and plays present) and
/// skipped with a notice when that subset is too small or degenerate.
inline CorpusReport analyze_corpus(const std::vector<ManifestEntry>& entries,
                                   const AnalysisConfig& config = {}) {
  if (entries.empty()) {
    throw Error(errc::corpus_empty, "manifest has no entries");
  }

  CorpusReport report;
  report.config = config;
  for (const ManifestEntry& entry : entries) {
    SongRecord record;
    record.entry = entry;
    try {
      const auto bytes = read_binary_file(entry.midi_path);
      const SmfDocument doc = parse_smf(bytes);
      record.features = extract_song_features(doc, selector_for(entry), config,
                                              &record.warnings, entry.id);
    } catch (const Error& e) {
      record.error = describe(e);
    }
    report.songs.push_back(std::move(record));
  }

  std::vector<double> ambitus_values, entropy_values;
  std::vector<IntervalDistribution> interval_dists;
  std::vector<double> ambitus_with_plays, entropy_with_plays, plays_for_ambitus,
      plays_for_entropy;
  for (const SongRecord& record : report.songs) {
    if (!record.features) continue;
    const SongFeatures& f = *record.features;
    ambitus_values.push_back(f.ambitus.semitones);
    entropy_values.push_back(f.entropy.normalized_entropy);
    interval_dists.push_back(f.intervals);
    if (record.entry.plays) {
      ambitus_with_plays.push_back(f.ambitus.semitones);
      plays_for_ambitus.push_back(static_cast<double>(*record.entry.plays));
      entropy_with_plays.push_back(f.entropy.normalized_entropy);
      plays_for_entropy.push_back(static_cast<double>(*record.entry.plays));
    }
  }
  if (interval_dists.empty()) {
    throw Error(errc::corpus_empty, "no song in the corpus could be analyzed");
  }

  report.mean_ambitus = mean(Sample{ambitus_values, "ambitus"});
  report.mean_entropy = mean(Sample{entropy_values, "entropy"});
  report.aggregate_intervals =
      aggregate_interval_distribution(interval_dists, config.aggregate_mode);
  report.aggregate_folded = fold_intervals(report.aggregate_intervals);

  detail::add_correlation(report, "ambitus", ambitus_with_plays, plays_for_ambitus);
  detail::add_correlation(report, "entropy", entropy_with_plays, plays_for_entropy);
  return report;
}

}  // namespace cantus
