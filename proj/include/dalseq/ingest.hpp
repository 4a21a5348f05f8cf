#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "dalseq/types.hpp"

namespace dalseq {

struct ManifestEntry {
  std::string app_id;
  std::filesystem::path path;
  Label label = Label::Benign;
  Dialect dialect = Dialect::Auto;
};

struct DatasetManifest {
  std::vector<ManifestEntry> entries;
};

// One disassembled application after normalization. dialect is resolved,
// lines are trimmed, non-empty and comment-free.
struct RawDocument {
  std::string app_id;
  Label label = Label::Benign;
  Dialect dialect = Dialect::Apktool;
  std::vector<std::string> lines;
};

// Tab-separated manifest: app_id <TAB> path <TAB> label <TAB> dialect.
// Lines starting with '#' are comments, blank lines are skipped.
// Relative paths are resolved against the manifest's directory.
DatasetManifest load_manifest(const std::filesystem::path& path);

// Builds a manifest from <root>/benign/*.txt and <root>/malicious/*.txt.
// app_id is the file stem, dialect starts as Auto. Entries are sorted by
// (label, app_id) so the result does not depend on directory iteration order.
DatasetManifest scan_directory(const std::filesystem::path& root);

// Reads a file as UTF-8, replacing invalid byte sequences with U+FFFD, and
// splits into lines (either line ending).
std::vector<std::string> read_text_lines(const std::filesystem::path& path);

std::string sanitize_utf8(const std::string& bytes);

// Line-signature voting over the first 500 non-blank lines. Throws
// Error(Undecidable) when no line matches any signature; the caller may
// instead pin the dialect in the manifest.
Dialect detect_dialect(const std::vector<std::string>& raw_lines);

// Per-line signature predicates (exposed for tests).
bool matches_apktool_signature(const std::string& line);
bool matches_ida_signature(const std::string& line);
bool matches_jeb_signature(const std::string& line);

// Drops '#'-comment lines and blank lines, trims surrounding whitespace,
// keeps order. Directive lines (.class/.method/labels) survive; the segment
// module uses them as boundary markers.
std::vector<std::string> normalize(const std::vector<std::string>& raw_lines);

// Loads, dialect-resolves and normalizes one manifest entry.
// force_dialect overrides both the entry and detection when not Auto.
RawDocument load_document(const ManifestEntry& entry,
                          Dialect force_dialect = Dialect::Auto);

}  // namespace dalseq
