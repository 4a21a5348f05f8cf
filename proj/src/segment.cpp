#include "dalseq/segment.hpp"

#include <algorithm>
#include <cctype>

namespace dalseq {

namespace {

std::string first_token_lower(const std::string& line) {
  size_t b = 0;
  while (b < line.size() && std::isspace(static_cast<unsigned char>(line[b]))) {
    ++b;
  }
  size_t e = b;
  while (e < line.size() &&
         !std::isspace(static_cast<unsigned char>(line[e]))) {
    ++e;
  }
  std::string tok = line.substr(b, e - b);
  std::transform(tok.begin(), tok.end(), tok.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return tok;
}

void note(SegmentNotes* notes, std::string msg) {
  if (notes) notes->messages.push_back(std::move(msg));
}

SequenceUnit make_unit(const RawDocument& doc, UnitKind kind,
                       std::vector<std::string> lines) {
  SequenceUnit u;
  u.app_id = doc.app_id;
  u.kind = kind;
  u.label = doc.label;
  u.lines = std::move(lines);
  return u;
}

std::vector<SequenceUnit> segment_instructions(const RawDocument& doc) {
  std::vector<SequenceUnit> units;
  units.reserve(doc.lines.size());
  for (const auto& line : doc.lines) {
    units.push_back(make_unit(doc, UnitKind::Ism, {line}));
  }
  return units;
}

std::vector<SequenceUnit> segment_blocks(const RawDocument& doc,
                                         const SegmentRules& rules) {
  std::vector<SequenceUnit> units;
  std::vector<std::string> current;
  for (const auto& line : doc.lines) {
    current.push_back(line);
    if (is_terminator_line(line, rules)) {
      units.push_back(make_unit(doc, UnitKind::Bsm, std::move(current)));
      current.clear();
    }
  }
  if (!current.empty()) {
    units.push_back(make_unit(doc, UnitKind::Bsm, std::move(current)));
  }
  return units;
}

std::vector<SequenceUnit> segment_methods(const RawDocument& doc,
                                          const SegmentRules& rules,
                                          SegmentNotes* notes) {
  bool any_start = std::any_of(
      doc.lines.begin(), doc.lines.end(), [&](const std::string& l) {
        return std::regex_search(l, rules.method_start);
      });
  if (!any_start) {
    note(notes, "msm: no method markers in \"" + doc.app_id +
                    "\"; degraded to a single unit");
    if (doc.lines.empty()) return {};
    return {make_unit(doc, UnitKind::Msm, doc.lines)};
  }

  std::vector<SequenceUnit> units;
  std::vector<std::string> current;
  bool in_method = false;
  for (const auto& line : doc.lines) {
    if (!in_method && std::regex_search(line, rules.method_start)) {
      if (!current.empty()) {  // residual lines between methods
        units.push_back(make_unit(doc, UnitKind::Msm, std::move(current)));
        current.clear();
      }
      in_method = true;
      current.push_back(line);
      continue;
    }
    current.push_back(line);
    if (in_method && std::regex_search(line, rules.method_end)) {
      units.push_back(make_unit(doc, UnitKind::Msm, std::move(current)));
      current.clear();
      in_method = false;
    }
  }
  if (!current.empty()) {
    units.push_back(make_unit(doc, UnitKind::Msm, std::move(current)));
  }
  return units;
}

std::vector<SequenceUnit> segment_classes(const RawDocument& doc,
                                          const SegmentRules& rules,
                                          SegmentNotes* notes) {
  bool any_start = std::any_of(
      doc.lines.begin(), doc.lines.end(), [&](const std::string& l) {
        return std::regex_search(l, rules.class_start);
      });
  if (!any_start) {
    note(notes, "csm: no class markers in \"" + doc.app_id +
                    "\"; degraded to a single unit");
    if (doc.lines.empty()) return {};
    return {make_unit(doc, UnitKind::Csm, doc.lines)};
  }

  // Start markers only: a class runs until the next marker. Lines before the
  // first marker form one residual unit.
  std::vector<SequenceUnit> units;
  std::vector<std::string> current;
  for (const auto& line : doc.lines) {
    if (std::regex_search(line, rules.class_start) && !current.empty()) {
      units.push_back(make_unit(doc, UnitKind::Csm, std::move(current)));
      current.clear();
    }
    current.push_back(line);
  }
  if (!current.empty()) {
    units.push_back(make_unit(doc, UnitKind::Csm, std::move(current)));
  }
  return units;
}

}  // namespace

std::vector<std::string> terminator_set(Dialect) {
  // Jump, call and exit families end straight-line flow. The same Dalvik
  // mnemonic families apply to all three dialects.
  return {"goto",   "if-",          "invoke-",      "return",
          "throw",  "packed-switch", "sparse-switch"};
}

SegmentRules rules_for(Dialect dialect) {
  SegmentRules rules;
  rules.terminator_prefixes = terminator_set(dialect);
  switch (dialect) {
    case Dialect::Apktool:
      rules.method_start = std::regex(R"(^\.method(\s|$))");
      rules.method_end = std::regex(R"(^\.end\s+method\b)");
      rules.class_start = std::regex(R"(^\.class(\s|$))");
      break;
    case Dialect::Jeb:
      // Best-effort: JEB text exports vary; these match its method/class
      // header lines where present.
      rules.method_start =
          std::regex(R"(^(\.method(\s|$)|method\s+\S+\()", std::regex::icase);
      rules.method_end =
          std::regex(R"(^(\.end\s+method\b|end\s+method\b))", std::regex::icase);
      rules.class_start =
          std::regex(R"(^(\.class(\s|$)|class\s+\S+))", std::regex::icase);
      break;
    case Dialect::Ida:
      // Best-effort: IDA listing function headers.
      rules.method_start = std::regex(
          R"(^(METHOD\b|FUNCTION\b|\S+\s+proc\b))", std::regex::icase);
      rules.method_end = std::regex(
          R"(^(END\s+METHOD\b|END\s+FUNCTION\b|\S+\s+endp\b))",
          std::regex::icase);
      rules.class_start = std::regex(R"(^CLASS\b)", std::regex::icase);
      break;
    case Dialect::Auto:
      rules = rules_for(Dialect::Apktool);
      break;
  }
  return rules;
}

bool is_terminator_line(const std::string& line, const SegmentRules& rules) {
  std::string mnemonic = first_token_lower(line);
  if (mnemonic.empty()) return false;
  for (const auto& prefix : rules.terminator_prefixes) {
    if (mnemonic.rfind(prefix, 0) == 0) return true;
  }
  return false;
}

std::vector<SequenceUnit> segment(const RawDocument& doc, UnitKind kind,
                                  SegmentNotes* notes) {
  return segment(doc, kind, rules_for(doc.dialect), notes);
}

std::vector<SequenceUnit> segment(const RawDocument& doc, UnitKind kind,
                                  const SegmentRules& rules,
                                  SegmentNotes* notes) {
  switch (kind) {
    case UnitKind::Ism:
      return segment_instructions(doc);
    case UnitKind::Bsm:
      return segment_blocks(doc, rules);
    case UnitKind::Msm:
      return segment_methods(doc, rules, notes);
    case UnitKind::Csm:
      return segment_classes(doc, rules, notes);
  }
  return {};
}

UnitStats unit_stats(const std::vector<SequenceUnit>& units) {
  UnitStats stats;
  stats.count = units.size();
  if (units.empty()) return stats;
  size_t total = 0;
  for (const auto& u : units) total += u.lines.size();
  stats.mean_lines = double(total) / double(units.size());
  return stats;
}

}  // namespace dalseq
