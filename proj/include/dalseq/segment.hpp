#pragma once

#include <optional>
#include <regex>
#include <string>
#include <vector>

#include "dalseq/ingest.hpp"
#include "dalseq/types.hpp"

namespace dalseq {

// One training sequence. Flattening all units of a document in order
// reproduces the document's lines exactly, for every kind.
struct SequenceUnit {
  std::string app_id;
  UnitKind kind = UnitKind::Ism;
  Label label = Label::Benign;
  std::vector<std::string> lines;
};

// Boundary rules for one dialect. Terminators are mnemonic prefixes; a line
// whose first whitespace-delimited token (lowercased) starts with one of them
// closes the current basic block. Method/class boundaries are regex pairs so
// non-smali output formats can be accommodated by configuration.
struct SegmentRules {
  std::vector<std::string> terminator_prefixes;
  std::regex method_start;
  std::regex method_end;
  std::regex class_start;
};

// Default rules per dialect. Apktool uses the smali directives. JEB and IDA
// have no uniform markers in their text output; their defaults are
// best-effort header patterns and documents without any hit degrade to a
// single unit (reported through SegmentNotes).
SegmentRules rules_for(Dialect dialect);

// The dialect's block-terminator prefixes: jump, call and exit families.
std::vector<std::string> terminator_set(Dialect dialect);

bool is_terminator_line(const std::string& line, const SegmentRules& rules);

// Diagnostics collected while segmenting (e.g. marker-less documents that
// degraded to a single unit).
struct SegmentNotes {
  std::vector<std::string> messages;
};

std::vector<SequenceUnit> segment(const RawDocument& doc, UnitKind kind,
                                  SegmentNotes* notes = nullptr);
std::vector<SequenceUnit> segment(const RawDocument& doc, UnitKind kind,
                                  const SegmentRules& rules,
                                  SegmentNotes* notes = nullptr);

struct UnitStats {
  size_t count = 0;
  double mean_lines = 0.0;
};

UnitStats unit_stats(const std::vector<SequenceUnit>& units);

}  // namespace dalseq
