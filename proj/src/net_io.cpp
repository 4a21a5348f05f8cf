#include <bit>
#include <cstring>
#include <fstream>

#include "dalseq/net.hpp"

namespace dalseq {

static_assert(std::endian::native == std::endian::little,
              "checkpoints are little-endian; big-endian hosts need swaps");

namespace {

constexpr char kCheckpointMagic[4] = {'D', 'S', 'Q', 'M'};
constexpr uint8_t kCheckpointVersion = 1;

template <typename T>
void write_pod(std::ofstream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_pod(std::ifstream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw Error(ErrorKind::BadFormat, "truncated checkpoint");
  return v;
}

void write_config(std::ofstream& out, const ModelConfig& c) {
  write_pod(out, uint64_t(c.seq_len));
  write_pod(out, uint64_t(c.vocab_size));
  write_pod(out, uint64_t(c.embedding_dim));
  write_pod(out, uint64_t(c.hidden_size));
  write_pod(out, uint64_t(c.dense_size));
  write_pod(out, c.dropout_rate);
  write_pod(out, uint64_t(c.batch_size));
  write_pod(out, c.learning_rate);
  write_pod(out, uint64_t(c.epochs));
  write_pod(out, uint64_t(c.seed));
  write_pod(out, uint8_t(c.mean_pooling ? 1 : 0));
}

ModelConfig read_config(std::ifstream& in) {
  ModelConfig c;
  c.seq_len = size_t(read_pod<uint64_t>(in));
  c.vocab_size = size_t(read_pod<uint64_t>(in));
  c.embedding_dim = size_t(read_pod<uint64_t>(in));
  c.hidden_size = size_t(read_pod<uint64_t>(in));
  c.dense_size = size_t(read_pod<uint64_t>(in));
  c.dropout_rate = read_pod<double>(in);
  c.batch_size = size_t(read_pod<uint64_t>(in));
  c.learning_rate = read_pod<double>(in);
  c.epochs = size_t(read_pod<uint64_t>(in));
  c.seed = read_pod<uint64_t>(in);
  c.mean_pooling = read_pod<uint8_t>(in) != 0;
  return c;
}

}  // namespace

void save_checkpoint(const ModelConfig& config, const ModelParams& params,
                     const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(ErrorKind::MissingFile, "cannot write: " + path.string());
  }
  out.write(kCheckpointMagic, 4);
  write_pod(out, kCheckpointVersion);
  write_config(out, config);

  for_each_param(const_cast<ModelParams&>(params),
                 [&](const char* name, Eigen::Index rows, Eigen::Index cols,
                     double* data) {
                   uint32_t len = uint32_t(std::strlen(name));
                   write_pod(out, len);
                   out.write(name, len);
                   write_pod(out, uint64_t(rows));
                   write_pod(out, uint64_t(cols));
                   // Row-major on disk regardless of Eigen's storage order;
                   // data is column-major (rows*cols contiguous).
                   for (Eigen::Index r = 0; r < rows; ++r) {
                     for (Eigen::Index c = 0; c < cols; ++c) {
                       write_pod(out, data[c * rows + r]);
                     }
                   }
                 });
  if (!out) throw Error(ErrorKind::BadFormat, "checkpoint write failed");
}

void load_checkpoint(const std::filesystem::path& path, ModelConfig& config,
                     ModelParams& params) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorKind::MissingFile, "cannot open: " + path.string());
  }
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kCheckpointMagic, 4) != 0) {
    throw Error(ErrorKind::BadFormat, "not a DSQM checkpoint: " + path.string());
  }
  uint8_t version = read_pod<uint8_t>(in);
  if (version != kCheckpointVersion) {
    throw Error(ErrorKind::BadFormat,
                "unsupported checkpoint version " + std::to_string(version));
  }
  config = read_config(in);
  params = ModelParams::zeros(config);
  for_each_param(params, [&](const char* name, Eigen::Index rows,
                             Eigen::Index cols, double* data) {
    uint32_t len = read_pod<uint32_t>(in);
    std::string stored(len, '\0');
    in.read(stored.data(), len);
    if (!in || stored != name) {
      throw Error(ErrorKind::BadFormat,
                  "checkpoint array order mismatch: expected " +
                      std::string(name) + ", got " + stored);
    }
    uint64_t r = read_pod<uint64_t>(in);
    uint64_t c = read_pod<uint64_t>(in);
    if (Eigen::Index(r) != rows || Eigen::Index(c) != cols) {
      throw Error(ErrorKind::BadFormat,
                  "checkpoint shape mismatch for " + std::string(name));
    }
    for (Eigen::Index rr = 0; rr < rows; ++rr) {
      for (Eigen::Index cc = 0; cc < cols; ++cc) {
        data[cc * rows + rr] = read_pod<double>(in);
      }
    }
  });
}

}  // namespace dalseq
