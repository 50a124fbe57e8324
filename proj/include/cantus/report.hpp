// Deterministic report rendering: the same report and config always produce
// the same bytes. Reals print with 6 decimal places in every format.

#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "cantus/corpus.hpp"
#include "cantus/error.hpp"

namespace cantus {

enum class ReportFormat { Text, Json, Csv };

namespace detail {

inline std::string fixed6(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", value);
  return buf;
}

inline std::string json_escape(const std::string& text) {
  std::string out;
  out.reserve(text.size() + 2);
  for (unsigned char c : text) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\b': out += "\\b"; break;
      case '\f': out += "\\f"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (c < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += static_cast<char>(c);
        }
    }
  }
  return out;
}

inline std::string csv_escape(const std::string& text) {
  if (text.find_first_of(",\"\n\r") == std::string::npos) return text;
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += '"';
  return out;
}

inline const char* pc_weighting_name(PcWeighting mode) {
  return mode == PcWeighting::DurationWeighted ? "duration" : "count";
}
inline const char* iv_weighting_name(IntervalWeighting mode) {
  return mode == IntervalWeighting::CountWeighted ? "count" : "duration";
}
inline const char* mono_policy_name(MonoPolicy policy) {
  switch (policy) {
    case MonoPolicy::KeepHigher: return "high";
    case MonoPolicy::KeepLower: return "low";
    case MonoPolicy::KeepFirst: return "first";
  }
  return "high";
}
inline const char* aggregate_mode_name(AggregateMode mode) {
  return mode == AggregateMode::EqualSongWeight ? "song" : "pooled";
}

template <typename Bins>
inline std::string json_number_array(const Bins& bins) {
  std::string out = "[";
  bool first = true;
  for (double v : bins) {
    if (!first) out += ",";
    first = false;
    out += fixed6(v);
  }
  out += "]";
  return out;
}

inline std::string json_string_array(const std::vector<std::string>& items,
                                     const std::string& indent) {
  if (items.empty()) return "[]";
  std::string out = "[\n";
  for (size_t i = 0; i < items.size(); ++i) {
    out += indent + "  \"" + json_escape(items[i]) + "\"";
    out += i + 1 < items.size() ? ",\n" : "\n";
  }
  out += indent + "]";
  return out;
}

inline std::string intervals_json(const IntervalDistribution& iv,
                                  const FoldedIntervalView& folded) {
  std::string out = "{";
  out += "\"signed\": " + json_number_array(iv.signed_bins);
  out += ", \"folded\": " + json_number_array(folded.unsigned_bins);
  out += ", \"overflow\": " + std::to_string(iv.overflow_count);
  out += "}";
  return out;
}

inline std::string song_json(const SongRecord& song, const std::string& indent) {
  std::string out = indent + "{\n";
  auto field = [&](const std::string& line, bool last = false) {
    out += indent + "  " + line + (last ? "\n" : ",\n");
  };
  field("\"id\": \"" + json_escape(song.entry.id) + "\"");
  field("\"title\": \"" + json_escape(song.entry.title) + "\"");
  field("\"plays\": " +
        (song.entry.plays ? std::to_string(*song.entry.plays) : "null"));
  if (song.features) {
    const SongFeatures& f = *song.features;
    field("\"note_count\": " + std::to_string(f.note_count));
    field("\"ambitus\": {\"semitones\": " + std::to_string(f.ambitus.semitones) +
          ", \"lowest\": " + std::to_string(f.ambitus.lowest_pitch) +
          ", \"highest\": " + std::to_string(f.ambitus.highest_pitch) + "}");
    field("\"entropy\": " + fixed6(f.entropy.normalized_entropy));
    field("\"intervals\": " +
          intervals_json(f.intervals, fold_intervals(f.intervals)));
  } else {
    field("\"error\": \"" + json_escape(song.error.value_or("unknown")) + "\"");
  }
  field("\"warnings\": " + json_string_array(song.warnings, indent + "  "), true);
  out += indent + "}";
  return out;
}

inline std::string render_json(const CorpusReport& report) {
  std::string out = "{\n";
  out += "  \"config\": {\"pc_weighting\": \"" +
         std::string(pc_weighting_name(report.config.pc_weighting)) +
         "\", \"iv_weighting\": \"" + iv_weighting_name(report.config.iv_weighting) +
         "\", \"mono_policy\": \"" + mono_policy_name(report.config.mono_policy) +
         "\", \"aggregate_mode\": \"" +
         aggregate_mode_name(report.config.aggregate_mode) + "\"},\n";

  out += "  \"songs\": [\n";
  for (size_t i = 0; i < report.songs.size(); ++i) {
    out += song_json(report.songs[i], "    ");
    out += i + 1 < report.songs.size() ? ",\n" : "\n";
  }
  out += "  ],\n";

  out += "  \"means\": {\"ambitus\": " + fixed6(report.mean_ambitus) +
         ", \"entropy\": " + fixed6(report.mean_entropy) + "},\n";
  out += "  \"aggregate_intervals\": " +
         intervals_json(report.aggregate_intervals, report.aggregate_folded) + ",\n";

  out += "  \"correlations\": [";
  for (size_t i = 0; i < report.correlations.size(); ++i) {
    const CorrelationEntry& c = report.correlations[i];
    if (i == 0) out += "\n";
    out += "    {\"feature\": \"" + json_escape(c.feature) + "\", \"r\": " +
           fixed6(c.result.r) + ", \"n\": " + std::to_string(c.result.n) +
           ", \"t\": " + fixed6(c.result.t_statistic) +
           ", \"dof\": " + std::to_string(c.result.dof) +
           ", \"p_two_tailed\": " + fixed6(c.result.p_two_tailed) + "}";
    out += i + 1 < report.correlations.size() ? ",\n" : "\n  ";
  }
  out += "],\n";

  out += "  \"notices\": " + json_string_array(report.notices, "  ") + "\n";
  out += "}\n";
  return out;
}

inline std::string render_csv(const CorpusReport& report) {
  std::string out = "id,title,ambitus,entropy,note_count,plays\n";
  for (const SongRecord& song : report.songs) {
    out += csv_escape(song.entry.id) + "," + csv_escape(song.entry.title) + ",";
    if (song.features) {
      out += std::to_string(song.features->ambitus.semitones) + "," +
             fixed6(song.features->entropy.normalized_entropy) + "," +
             std::to_string(song.features->note_count);
    } else {
      out += ",,";
    }
    out += ",";
    if (song.entry.plays) out += std::to_string(*song.entry.plays);
    out += "\n";
  }
  return out;
}

inline std::string render_text(const CorpusReport& report) {
  std::string out = "corpus report\n";
  out += "=============\n";
  out += "config: pc-weighting=" +
         std::string(pc_weighting_name(report.config.pc_weighting)) +
         " iv-weighting=" + iv_weighting_name(report.config.iv_weighting) +
         " mono-policy=" + mono_policy_name(report.config.mono_policy) +
         " aggregate=" + aggregate_mode_name(report.config.aggregate_mode) + "\n\n";

  size_t analyzed = 0;
  for (const SongRecord& song : report.songs) {
    if (song.features) ++analyzed;
  }
  out += "songs: " + std::to_string(report.songs.size()) + " (" +
         std::to_string(analyzed) + " analyzed, " +
         std::to_string(report.songs.size() - analyzed) + " failed)\n";
  for (const SongRecord& song : report.songs) {
    const std::string shown =
        song.entry.title.empty() ? song.entry.id : song.entry.title;
    out += "  " + song.entry.id + " (" + shown + "): ";
    if (song.features) {
      const SongFeatures& f = *song.features;
      out += "ambitus " + std::to_string(f.ambitus.semitones) + " (" +
             std::to_string(f.ambitus.lowest_pitch) + "-" +
             std::to_string(f.ambitus.highest_pitch) + "), entropy " +
             fixed6(f.entropy.normalized_entropy) + ", notes " +
             std::to_string(f.note_count);
      if (song.entry.plays) out += ", plays " + std::to_string(*song.entry.plays);
      out += "\n";
    } else {
      out += "FAILED " + song.error.value_or("unknown") + "\n";
    }
  }

  out += "\nmean ambitus: " + fixed6(report.mean_ambitus) + "\n";
  out += "mean entropy: " + fixed6(report.mean_entropy) + "\n";

  out += "\naggregate intervals (folded):\n";
  for (size_t k = 0; k < report.aggregate_folded.unsigned_bins.size(); ++k) {
    out += "  " + std::string(kFoldedIntervalNames[k]) + " " +
           fixed6(report.aggregate_folded.unsigned_bins[k]) + "\n";
  }
  out += "  intervals beyond one octave: " +
         std::to_string(report.aggregate_intervals.overflow_count) + "\n";

  out += "\ncorrelations:\n";
  if (report.correlations.empty()) out += "  (none)\n";
  for (const CorrelationEntry& c : report.correlations) {
    out += "  " + c.feature + " vs plays: r=" + fixed6(c.result.r) +
           " n=" + std::to_string(c.result.n) + " t=" + fixed6(c.result.t_statistic) +
           " dof=" + std::to_string(c.result.dof) +
           " p=" + fixed6(c.result.p_two_tailed) + "\n";
  }

  if (!report.notices.empty()) {
    out += "\nnotices:\n";
    for (const std::string& notice : report.notices) out += "  " + notice + "\n";
  }
  bool any_warning = false;
  for (const SongRecord& song : report.songs) {
    if (!song.warnings.empty()) any_warning = true;
  }
  if (any_warning) {
    out += "\nwarnings:\n";
    for (const SongRecord& song : report.songs) {
      for (const std::string& w : song.warnings) {
        out += "  " + song.entry.id + ": " + w + "\n";
      }
    }
  }
  return out;
}

}  // namespace detail

inline std::string render_report(const CorpusReport& report, ReportFormat format) {
  switch (format) {
    case ReportFormat::Json: return detail::render_json(report);
    case ReportFormat::Csv: return detail::render_csv(report);
    case ReportFormat::Text: break;
  }
  return detail::render_text(report);
}

/// Render a single song as the same JSON fragment used in the report's songs
/// array; the single-file extract command emits this.
inline std::string render_song_json(const SongRecord& song) {
  return detail::song_json(song, "") + "\n";
}

inline void write_text_file(const std::filesystem::path& path,
                            const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(errc::io_failure, "cannot open for writing: " + path.string());
  }
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) {
    throw Error(errc::io_failure, "write failed: " + path.string());
  }
}

inline void write_report(const CorpusReport& report, ReportFormat format,
                         const std::filesystem::path& path) {
  write_text_file(path, render_report(report, format));
}

}  // namespace cantus
