#include "dalseq/ingest.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

namespace dalseq {

namespace fs = std::filesystem;

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)); }

std::string trim(const std::string& s) {
  size_t b = 0, e = s.size();
  while (b < e && is_space(s[b])) ++b;
  while (e > b && is_space(s[e - 1])) --e;
  return s.substr(b, e - b);
}

bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}

}  // namespace

DatasetManifest load_manifest(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorKind::MissingFile,
                "manifest not found: " + path.string());
  }
  DatasetManifest manifest;
  std::set<std::string> seen_ids;
  std::set<std::string> seen_paths;
  std::string raw;
  size_t line_no = 0;
  fs::path base = path.parent_path();
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = trim(sanitize_utf8(raw));
    if (line.empty() || line[0] == '#') continue;

    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, '\t')) fields.push_back(trim(field));
    if (fields.size() != 4) {
      throw Error(ErrorKind::MalformedEntry,
                  "manifest line " + std::to_string(line_no) +
                      ": expected 4 tab-separated fields, got " +
                      std::to_string(fields.size()));
    }

    ManifestEntry entry;
    entry.app_id = fields[0];
    if (entry.app_id.empty()) {
      throw Error(ErrorKind::MalformedEntry,
                  "manifest line " + std::to_string(line_no) + ": empty app_id");
    }
    fs::path p = fields[1];
    entry.path = p.is_absolute() ? p : base / p;
    try {
      entry.label = parse_label(fields[2]);
      entry.dialect = parse_dialect(fields[3]);
    } catch (const Error& e) {
      throw Error(ErrorKind::MalformedEntry,
                  "manifest line " + std::to_string(line_no) + ": " + e.what());
    }

    if (!seen_ids.insert(entry.app_id).second) {
      throw Error(ErrorKind::DuplicateAppId,
                  "duplicate app_id \"" + entry.app_id + "\" at manifest line " +
                      std::to_string(line_no));
    }
    if (!seen_paths.insert(entry.path.string()).second) {
      throw Error(ErrorKind::MalformedEntry,
                  "manifest line " + std::to_string(line_no) +
                      ": path listed twice: " + entry.path.string());
    }
    manifest.entries.push_back(std::move(entry));
  }
  return manifest;
}

DatasetManifest scan_directory(const fs::path& root) {
  DatasetManifest manifest;
  std::set<std::string> seen_ids;
  const std::array<std::pair<const char*, Label>, 2> groups = {
      {{"benign", Label::Benign}, {"malicious", Label::Malicious}}};
  for (const auto& [dir_name, label] : groups) {
    fs::path dir = root / dir_name;
    if (!fs::is_directory(dir)) continue;
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir)) {
      if (e.is_regular_file() && e.path().extension() == ".txt") {
        files.push_back(e.path());
      }
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
      ManifestEntry entry;
      entry.app_id = f.stem().string();
      entry.path = f;
      entry.label = label;
      entry.dialect = Dialect::Auto;
      if (!seen_ids.insert(entry.app_id).second) {
        throw Error(ErrorKind::DuplicateAppId,
                    "file stem \"" + entry.app_id +
                        "\" appears under both benign/ and malicious/");
      }
      manifest.entries.push_back(std::move(entry));
    }
  }
  if (manifest.entries.empty()) {
    throw Error(ErrorKind::EmptyCorpus,
                "no .txt files under " + (root / "benign").string() + " or " +
                    (root / "malicious").string());
  }
  return manifest;
}

std::string sanitize_utf8(const std::string& bytes) {
  static const char kReplacement[] = "\xEF\xBF\xBD";  // U+FFFD
  std::string out;
  out.reserve(bytes.size());
  size_t i = 0;
  while (i < bytes.size()) {
    unsigned char c = bytes[i];
    size_t len = 0;
    if (c < 0x80) {
      len = 1;
    } else if ((c & 0xE0) == 0xC0 && c >= 0xC2) {
      len = 2;
    } else if ((c & 0xF0) == 0xE0) {
      len = 3;
    } else if ((c & 0xF8) == 0xF0 && c <= 0xF4) {
      len = 4;
    } else {
      out += kReplacement;
      ++i;
      continue;
    }
    if (len == 1) {
      out += char(c);
      ++i;
      continue;
    }
    bool ok = i + len <= bytes.size();
    for (size_t k = 1; ok && k < len; ++k) {
      ok = (static_cast<unsigned char>(bytes[i + k]) & 0xC0) == 0x80;
    }
    if (ok) {
      out.append(bytes, i, len);
      i += len;
    } else {
      out += kReplacement;
      ++i;
    }
  }
  return out;
}

std::vector<std::string> read_text_lines(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorKind::MissingFile, "cannot open: " + path.string());
  }
  std::string content((std::istreambuf_iterator<char>(in)),
                      std::istreambuf_iterator<char>());
  content = sanitize_utf8(content);
  std::vector<std::string> lines;
  std::string cur;
  for (char c : content) {
    if (c == '\n') {
      if (!cur.empty() && cur.back() == '\r') cur.pop_back();
      lines.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) {
    if (cur.back() == '\r') cur.pop_back();
    lines.push_back(std::move(cur));
  }
  return lines;
}

// Apktool invoke lines pair a register group "{...}," with an
// "Lpath/To/Class;" descriptor followed by "->" (whitespace tolerated in
// between; some dumps print "; ->").
bool matches_apktool_signature(const std::string& line) {
  size_t open = line.find('{');
  bool has_group = false;
  while (open != std::string::npos && !has_group) {
    size_t close = line.find('}', open + 1);
    if (close == std::string::npos) break;
    size_t after = close + 1;
    while (after < line.size() && is_space(line[after])) ++after;
    if (after < line.size() && line[after] == ',') has_group = true;
    open = line.find('{', open + 1);
  }
  if (!has_group) return false;

  // L...;-> descriptor with at least one '/' in the path part.
  for (size_t i = 0; i + 1 < line.size(); ++i) {
    if (line[i] != 'L') continue;
    size_t j = i + 1;
    bool slash = false;
    while (j < line.size() &&
           (is_ident_char(line[j]) || line[j] == '/' || line[j] == '.')) {
      slash = slash || line[j] == '/';
      ++j;
    }
    if (!slash || j >= line.size() || line[j] != ';') continue;
    size_t k = j + 1;
    while (k < line.size() && is_space(line[k])) ++k;
    if (k + 1 < line.size() && line[k] == '-' && line[k + 1] == '>') return true;
  }
  return false;
}

bool matches_ida_signature(const std::string& line) {
  return line.find("<ref ") != std::string::npos ||
         line.find("<void ") != std::string::npos;
}

// Bare Name->member( call with neither an apktool register-group/descriptor
// pair nor IDA angle-bracket annotations on the same line.
bool matches_jeb_signature(const std::string& line) {
  if (matches_apktool_signature(line) || matches_ida_signature(line)) {
    return false;
  }
  for (size_t i = 0; i + 2 < line.size(); ++i) {
    if (line[i] != '-' || line[i + 1] != '>') continue;
    if (i == 0 || !is_ident_char(line[i - 1])) continue;
    size_t j = i + 2;
    if (j >= line.size() || !(is_ident_char(line[j]) || line[j] == '<')) {
      continue;
    }
    while (j < line.size() &&
           (is_ident_char(line[j]) || line[j] == '<' || line[j] == '>')) {
      ++j;
    }
    if (j < line.size() && line[j] == '(') return true;
  }
  return false;
}

Dialect detect_dialect(const std::vector<std::string>& raw_lines) {
  constexpr size_t kMaxCandidates = 500;
  size_t apktool = 0, ida = 0, jeb = 0, seen = 0;
  for (const auto& raw : raw_lines) {
    std::string line = trim(raw);
    if (line.empty()) continue;
    if (++seen > kMaxCandidates) break;
    if (matches_apktool_signature(line)) ++apktool;
    if (matches_ida_signature(line)) ++ida;
    if (matches_jeb_signature(line)) ++jeb;
  }
  if (apktool + ida + jeb == 0) {
    throw Error(ErrorKind::Undecidable,
                "no dialect signature in the first " +
                    std::to_string(kMaxCandidates) + " non-blank lines");
  }
  // Tie priority: apktool > ida > jeb.
  if (apktool >= ida && apktool >= jeb) return Dialect::Apktool;
  if (ida >= jeb) return Dialect::Ida;
  return Dialect::Jeb;
}

std::vector<std::string> normalize(const std::vector<std::string>& raw_lines) {
  std::vector<std::string> out;
  out.reserve(raw_lines.size());
  for (const auto& raw : raw_lines) {
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    out.push_back(std::move(line));
  }
  return out;
}

RawDocument load_document(const ManifestEntry& entry, Dialect force_dialect) {
  RawDocument doc;
  doc.app_id = entry.app_id;
  doc.label = entry.label;
  std::vector<std::string> raw = read_text_lines(entry.path);
  Dialect d = force_dialect != Dialect::Auto ? force_dialect : entry.dialect;
  if (d == Dialect::Auto) d = detect_dialect(raw);
  doc.dialect = d;
  doc.lines = normalize(raw);
  return doc;
}

}  // namespace dalseq
