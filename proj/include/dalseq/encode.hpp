#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <unordered_map>
#include <vector>

#include "dalseq/segment.hpp"
#include "dalseq/types.hpp"

namespace dalseq {

constexpr int32_t kPadId = 0;
constexpr int32_t kOovId = 1;

// Commas become spaces, then split on whitespace runs; lines concatenate in
// order. The rule is deliberately a single replaceable function.
std::vector<std::string> tokenize_line(const std::string& line);
std::vector<std::string> tokenize(const SequenceUnit& unit);

// Contiguous token ids, 0 = <PAD>, 1 = <OOV>.
class Vocabulary {
 public:
  Vocabulary();

  // Id for a token at encode time: the token's id, or kOovId when absent.
  int32_t id_of(const std::string& token) const;

  // Inserts a token at the next free id. Throws on duplicates.
  void add(const std::string& token);

  size_t size() const { return id_to_token_.size(); }
  const std::string& token_at(int32_t id) const { return id_to_token_.at(id); }
  const std::unordered_map<std::string, int32_t>& token_to_id() const {
    return token_to_id_;
  }

 private:
  std::unordered_map<std::string, int32_t> token_to_id_;
  std::vector<std::string> id_to_token_;
};

// Tokens with frequency >= min_freq, ranked by (frequency desc, token asc),
// first max_size-2 of them assigned ids from 2 upward. Built from training
// units only. Throws Error(EmptyTrainingSet) when units is empty.
Vocabulary build_vocabulary(const std::vector<SequenceUnit>& units,
                            size_t max_size = 30000, size_t min_freq = 1);

// One token<TAB>id line per id; ids 0 and 1 written as <PAD> and <OOV>.
void save_vocabulary(const Vocabulary& vocab,
                     const std::filesystem::path& path);
Vocabulary load_vocabulary(const std::filesystem::path& path);

struct EncodedSequence {
  std::vector<int32_t> ids;  // length exactly L, pads only as a suffix
  int label = 0;             // 1 = malicious
  std::string app_id;
};

// Unknown tokens map to kOovId; more than L tokens keep the first L; fewer
// pad with kPadId at the end.
EncodedSequence encode(const SequenceUnit& unit, const Vocabulary& vocab,
                       size_t seq_len);

// The per-kind sequence lengths: 15 / 40 / 500 / 2500.
size_t seq_len_for(UnitKind kind);

// Binary container: "DSQE", version byte, u32 L, u64 count, then per row
// L little-endian int32 ids followed by one label byte. app ids are not
// stored; they live in the run report.
void save_encoded_dataset(const std::vector<EncodedSequence>& rows,
                          size_t seq_len, const std::filesystem::path& path);
std::vector<EncodedSequence> load_encoded_dataset(
    const std::filesystem::path& path, size_t* seq_len_out = nullptr);

}  // namespace dalseq
