#include "dalseq/encode.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cstring>
#include <fstream>

namespace dalseq {

static_assert(std::endian::native == std::endian::little,
              "on-disk formats are little-endian; big-endian hosts need swaps");

std::vector<std::string> tokenize_line(const std::string& line) {
  std::vector<std::string> tokens;
  std::string cur;
  for (char c : line) {
    if (c == ',') c = ' ';
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!cur.empty()) {
        tokens.push_back(std::move(cur));
        cur.clear();
      }
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) tokens.push_back(std::move(cur));
  return tokens;
}

std::vector<std::string> tokenize(const SequenceUnit& unit) {
  std::vector<std::string> tokens;
  for (const auto& line : unit.lines) {
    auto t = tokenize_line(line);
    tokens.insert(tokens.end(), std::make_move_iterator(t.begin()),
                  std::make_move_iterator(t.end()));
  }
  return tokens;
}

Vocabulary::Vocabulary() : id_to_token_{"<PAD>", "<OOV>"} {}

int32_t Vocabulary::id_of(const std::string& token) const {
  auto it = token_to_id_.find(token);
  return it == token_to_id_.end() ? kOovId : it->second;
}

void Vocabulary::add(const std::string& token) {
  int32_t id = int32_t(id_to_token_.size());
  if (!token_to_id_.emplace(token, id).second) {
    throw Error(ErrorKind::BadFormat, "duplicate vocabulary token: " + token);
  }
  id_to_token_.push_back(token);
}

Vocabulary build_vocabulary(const std::vector<SequenceUnit>& units,
                            size_t max_size, size_t min_freq) {
  if (units.empty()) {
    throw Error(ErrorKind::EmptyTrainingSet,
                "cannot build a vocabulary from zero training units");
  }
  std::unordered_map<std::string, uint64_t> freq;
  for (const auto& unit : units) {
    for (auto& tok : tokenize(unit)) ++freq[std::move(tok)];
  }
  std::vector<std::pair<std::string, uint64_t>> ranked;
  ranked.reserve(freq.size());
  for (auto& [tok, n] : freq) {
    if (n >= min_freq) ranked.emplace_back(tok, n);
  }
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });

  Vocabulary vocab;
  size_t keep = max_size >= 2 ? max_size - 2 : 0;
  for (size_t i = 0; i < ranked.size() && i < keep; ++i) {
    vocab.add(ranked[i].first);
  }
  return vocab;
}

void save_vocabulary(const Vocabulary& vocab,
                     const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(ErrorKind::MissingFile, "cannot write: " + path.string());
  }
  for (size_t id = 0; id < vocab.size(); ++id) {
    out << vocab.token_at(int32_t(id)) << '\t' << id << '\n';
  }
}

Vocabulary load_vocabulary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorKind::MissingFile, "cannot open: " + path.string());
  }
  Vocabulary vocab;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    size_t tab = line.rfind('\t');
    if (tab == std::string::npos) {
      throw Error(ErrorKind::BadFormat, "vocabulary line " +
                                            std::to_string(line_no) +
                                            ": missing tab separator");
    }
    std::string token = line.substr(0, tab);
    long id = std::stol(line.substr(tab + 1));
    if (id == kPadId || id == kOovId) continue;  // reserved rows
    if (id != long(vocab.size())) {
      throw Error(ErrorKind::BadFormat,
                  "vocabulary line " + std::to_string(line_no) +
                      ": non-contiguous id " + std::to_string(id));
    }
    vocab.add(token);
  }
  return vocab;
}

EncodedSequence encode(const SequenceUnit& unit, const Vocabulary& vocab,
                       size_t seq_len) {
  EncodedSequence enc;
  enc.app_id = unit.app_id;
  enc.label = unit.label == Label::Malicious ? 1 : 0;
  enc.ids.assign(seq_len, kPadId);
  std::vector<std::string> tokens = tokenize(unit);
  size_t n = std::min(tokens.size(), seq_len);  // head truncation
  for (size_t i = 0; i < n; ++i) {
    enc.ids[i] = vocab.id_of(tokens[i]);
  }
  return enc;
}

size_t seq_len_for(UnitKind kind) {
  switch (kind) {
    case UnitKind::Ism:
      return 15;
    case UnitKind::Bsm:
      return 40;
    case UnitKind::Msm:
      return 500;
    case UnitKind::Csm:
      return 2500;
  }
  return 15;
}

namespace {

constexpr char kDatasetMagic[4] = {'D', 'S', 'Q', 'E'};
constexpr uint8_t kDatasetVersion = 1;

template <typename T>
void write_pod(std::ofstream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_pod(std::ifstream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw Error(ErrorKind::BadFormat, "truncated dataset file");
  return v;
}

}  // namespace

void save_encoded_dataset(const std::vector<EncodedSequence>& rows,
                          size_t seq_len, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(ErrorKind::MissingFile, "cannot write: " + path.string());
  }
  out.write(kDatasetMagic, 4);
  write_pod(out, kDatasetVersion);
  write_pod(out, uint32_t(seq_len));
  write_pod(out, uint64_t(rows.size()));
  for (const auto& row : rows) {
    if (row.ids.size() != seq_len) {
      throw Error(ErrorKind::BadFormat, "row length mismatch in dataset save");
    }
    out.write(reinterpret_cast<const char*>(row.ids.data()),
              std::streamsize(seq_len * sizeof(int32_t)));
    uint8_t label = uint8_t(row.label);
    write_pod(out, label);
  }
}

std::vector<EncodedSequence> load_encoded_dataset(
    const std::filesystem::path& path, size_t* seq_len_out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorKind::MissingFile, "cannot open: " + path.string());
  }
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kDatasetMagic, 4) != 0) {
    throw Error(ErrorKind::BadFormat, "not a DSQE dataset: " + path.string());
  }
  uint8_t version = read_pod<uint8_t>(in);
  if (version != kDatasetVersion) {
    throw Error(ErrorKind::BadFormat,
                "unsupported dataset version " + std::to_string(version));
  }
  uint32_t seq_len = read_pod<uint32_t>(in);
  uint64_t count = read_pod<uint64_t>(in);
  if (seq_len_out) *seq_len_out = seq_len;
  std::vector<EncodedSequence> rows(count);
  for (auto& row : rows) {
    row.ids.resize(seq_len);
    in.read(reinterpret_cast<char*>(row.ids.data()),
            std::streamsize(seq_len * sizeof(int32_t)));
    row.label = read_pod<uint8_t>(in);
    if (!in) throw Error(ErrorKind::BadFormat, "truncated dataset file");
  }
  return rows;
}

}  // namespace dalseq
