// Error taxonomy shared by every cantus module.

#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace cantus {

enum class errc {
  // SMF decoding
  missing_header,
  unsupported_format,
  unsupported_division,
  truncated_file,
  malformed_vlq,
  malformed_event,
  running_status_without_prior,
  // note matrix / voice selection
  empty_voice,
  not_monophonic,
  // statistics
  empty_input,
  length_mismatch,
  zero_variance,
  degenerate_sample,
  non_convergence,
  // manifest / corpus / output
  manifest_syntax,
  duplicate_id,
  invalid_field,
  corpus_empty,
  io_failure,
};

inline const char* errc_name(errc code) {
  switch (code) {
    case errc::missing_header: return "missing_header";
    case errc::unsupported_format: return "unsupported_format";
    case errc::unsupported_division: return "unsupported_division";
    case errc::truncated_file: return "truncated_file";
    case errc::malformed_vlq: return "malformed_vlq";
    case errc::malformed_event: return "malformed_event";
    case errc::running_status_without_prior: return "running_status_without_prior";
    case errc::empty_voice: return "empty_voice";
    case errc::not_monophonic: return "not_monophonic";
    case errc::empty_input: return "empty_input";
    case errc::length_mismatch: return "length_mismatch";
    case errc::zero_variance: return "zero_variance";
    case errc::degenerate_sample: return "degenerate_sample";
    case errc::non_convergence: return "non_convergence";
    case errc::manifest_syntax: return "manifest_syntax";
    case errc::duplicate_id: return "duplicate_id";
    case errc::invalid_field: return "invalid_field";
    case errc::corpus_empty: return "corpus_empty";
    case errc::io_failure: return "io_failure";
  }
  return "unknown";
}

/// Exception carrying an error code plus an optional position payload:
/// a byte offset for SMF errors, a line number for manifest errors.
/// Messages are expected to spell the position out in words; the raw
/// number is kept for programmatic checks.
class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}
  Error(errc code, const std::string& message, size_t position)
      : std::runtime_error(message), code_(code), position_(position) {}

  errc code() const { return code_; }
  std::optional<size_t> position() const { return position_; }

 private:
  errc code_;
  std::optional<size_t> position_;
};

/// One-line rendering used for per-song error records and CLI messages.
inline std::string describe(const Error& e) {
  return std::string(errc_name(e.code())) + ": " + e.what();
}

}  // namespace cantus
