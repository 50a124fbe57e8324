// Corpus manifest: a small CSV schema naming each song, its MIDI file, the
// voice-selection hints, and an optional play count. Play counts are static
// inputs; nothing is ever fetched.

#pragma once

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "cantus/error.hpp"

namespace cantus {

struct ManifestEntry {
  std::string id;         // unique within the manifest
  std::string title;
  std::string midi_path;  // non-empty
  std::optional<int> track;
  std::optional<int> channel;
  std::optional<std::string> name_pattern;
  std::optional<uint64_t> plays;  // absent when the cell is blank
};

namespace detail {

inline constexpr const char* kManifestHeader =
    "id,title,midi_path,track,channel,name_pattern,plays";

/// Split one CSV line; double quotes wrap fields that contain commas or
/// quotes, with "" as the escaped quote. Quoted fields may not span lines.
inline std::vector<std::string> split_csv_line(const std::string& line,
                                               size_t line_number) {
  std::vector<std::string> fields;
  std::string current;
  size_t i = 0;
  while (true) {
    current.clear();
    if (i < line.size() && line[i] == '"') {
      ++i;
      bool closed = false;
      while (i < line.size()) {
        if (line[i] == '"') {
          if (i + 1 < line.size() && line[i + 1] == '"') {
            current += '"';
            i += 2;
          } else {
            ++i;
            closed = true;
            break;
          }
        } else {
          current += line[i++];
        }
      }
      if (!closed) {
        throw Error(errc::manifest_syntax,
                    "line " + std::to_string(line_number) +
                        ": unterminated quoted field",
                    line_number);
      }
      if (i < line.size() && line[i] != ',') {
        throw Error(errc::manifest_syntax,
                    "line " + std::to_string(line_number) +
                        ": unexpected character after closing quote",
                    line_number);
      }
    } else {
      while (i < line.size() && line[i] != ',') current += line[i++];
    }
    fields.push_back(current);
    if (i >= line.size()) break;
    ++i;  // the comma
  }
  return fields;
}

inline std::optional<uint64_t> parse_count_field(const std::string& text,
                                                 const char* field,
                                                 size_t line_number) {
  if (text.empty()) return std::nullopt;
  uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw Error(errc::invalid_field,
                "line " + std::to_string(line_number) + ": field '" + field +
                    "' must be a non-negative integer, got '" + text + "'",
                line_number);
  }
  return value;
}

}  // namespace detail

/// Parse manifest text. Lines whose first non-blank character is '#' are
/// comments; blank lines are skipped; the first data line must be the exact
/// header. Blank cells mean "absent".
inline std::vector<ManifestEntry> parse_manifest(std::string_view text) {
  std::vector<ManifestEntry> entries;
  std::set<std::string> seen_ids;
  bool header_seen = false;

  size_t line_number = 0;
  std::istringstream stream{std::string(text)};
  std::string line;
  while (std::getline(stream, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const size_t first_nonblank = line.find_first_not_of(" \t");
    if (first_nonblank == std::string::npos) continue;
    if (line[first_nonblank] == '#') continue;

    if (!header_seen) {
      if (line != detail::kManifestHeader) {
        throw Error(errc::manifest_syntax,
                    "line " + std::to_string(line_number) +
                        ": header must be exactly '" +
                        detail::kManifestHeader + "'",
                    line_number);
      }
      header_seen = true;
      continue;
    }

    auto fields = detail::split_csv_line(line, line_number);
    if (fields.size() != 7) {
      throw Error(errc::manifest_syntax,
                  "line " + std::to_string(line_number) + ": expected 7 fields, got " +
                      std::to_string(fields.size()),
                  line_number);
    }

    ManifestEntry entry;
    entry.id = fields[0];
    entry.title = fields[1];
    entry.midi_path = fields[2];
    if (entry.id.empty()) {
      throw Error(errc::invalid_field,
                  "line " + std::to_string(line_number) + ": id must not be empty",
                  line_number);
    }
    if (entry.midi_path.empty()) {
      throw Error(errc::invalid_field,
                  "line " + std::to_string(line_number) +
                      ": midi_path must not be empty",
                  line_number);
    }
    if (!seen_ids.insert(entry.id).second) {
      throw Error(errc::duplicate_id,
                  "line " + std::to_string(line_number) + ": duplicate id '" +
                      entry.id + "'",
                  line_number);
    }
    if (auto track = detail::parse_count_field(fields[3], "track", line_number)) {
      entry.track = static_cast<int>(*track);
    }
    if (auto channel = detail::parse_count_field(fields[4], "channel", line_number)) {
      if (*channel > 15) {
        throw Error(errc::invalid_field,
                    "line " + std::to_string(line_number) +
                        ": channel must be 0-15, got " + fields[4],
                    line_number);
      }
      entry.channel = static_cast<int>(*channel);
    }
    if (!fields[5].empty()) entry.name_pattern = fields[5];
    entry.plays = detail::parse_count_field(fields[6], "plays", line_number);
    entries.push_back(std::move(entry));
  }

  if (!header_seen) {
    throw Error(errc::manifest_syntax, "manifest has no header line", 0);
  }
  return entries;
}

/// Load a manifest file. Relative midi_path cells resolve against the
/// manifest's own directory so a corpus can move as one unit.
inline std::vector<ManifestEntry> load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(errc::io_failure, "cannot open manifest: " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  auto entries = parse_manifest(buffer.str());
  const auto base = path.parent_path();
  for (ManifestEntry& entry : entries) {
    std::filesystem::path midi(entry.midi_path);
    if (midi.is_relative() && !base.empty()) {
      entry.midi_path = (base / midi).string();
    }
  }
  return entries;
}

}  // namespace cantus
