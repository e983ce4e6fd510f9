#pragma once

// Structured output for the command-line tool.  Every subcommand produces a
// Report: the subcommand name, an echo of the parsed inputs (so the caller
// can confirm what was actually computed), a structured result body, the
// schema version, and the wall-clock time spent.
//
// Two serializations exist.  The JSON form is the stable machine interface:
// field names and nesting are versioned via kReportSchemaVersion, and
// report_from_json(report_to_json(r)) == r holds exactly.  The text form is
// the human-facing default; it renders the same tree as indented key/value
// lines and makes no stability promise beyond being readable.
//
// Reports are deterministic: two runs with identical inputs (and, where a
// subcommand uses randomness, identical seeds) differ at most in the
// elapsed_seconds field.

#include <string>

#include <json.hpp>

namespace dynprim {

inline constexpr const char* kToolName = "dynprim";
inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr const char* kReportSchemaVersion = "1";

struct Report {
    std::string subcommand;
    nlohmann::ordered_json input;   // echo of inputs, post-parse canonical form
    nlohmann::ordered_json result;  // subcommand-specific body
    std::string schema = kReportSchemaVersion;
    double elapsed_seconds = 0.0;

    bool operator==(const Report&) const = default;
};

// Stable machine form (pretty-printed, two-space indent, trailing newline).
std::string report_to_json(const Report& r);

// Inverse of report_to_json; throws InputError on malformed input.
Report report_from_json(const std::string& text);

// Human-facing indented rendering of the same tree.
std::string report_to_text(const Report& r);

}  // namespace dynprim
