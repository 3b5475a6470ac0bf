#include "attex/checkpoint.hpp"

#include <cstring>
#include <fstream>
#include <stdexcept>

namespace attex {

namespace {

constexpr char kMagic[8] = {'A', 'T', 'X', 'M', 'O', 'D', 'L', '1'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void write_pod(std::ofstream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_pod(std::ifstream& in) {
  T v;
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw std::runtime_error("checkpoint: truncated file");
  return v;
}

void write_string(std::ofstream& out, const std::string& s) {
  write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(s.size()));
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::string read_string(std::ifstream& in) {
  std::uint32_t len = read_pod<std::uint32_t>(in);
  std::string s(len, '\0');
  in.read(s.data(), len);
  if (!in) throw std::runtime_error("checkpoint: truncated file");
  return s;
}

}  // namespace

void save_checkpoint(const ContextModel& model, std::uint64_t symbol_seed,
                     const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("checkpoint: cannot write " + path);
  out.write(kMagic, sizeof(kMagic));
  write_pod<std::uint32_t>(out, kVersion);

  const EncoderConfig& cfg = model.config();
  write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(cfg.kind));
  write_pod<std::uint64_t>(out, cfg.conv_window);
  write_pod<std::uint64_t>(out, cfg.filter_count);
  write_pod<std::uint64_t>(out, cfg.lstm_hidden);
  write_pod<std::uint64_t>(out, cfg.mlp_hidden);
  write_pod<std::uint64_t>(out, cfg.class_count);
  write_pod<std::uint8_t>(out, cfg.sum_bidirectional ? 1 : 0);
  write_pod<std::uint64_t>(out, model.d_word());
  write_pod<std::uint64_t>(out, model.feature_dims().n_max);
  write_pod<std::uint64_t>(out, model.feature_dims().d_feat);
  write_pod<std::uint64_t>(out, symbol_seed);

  const auto& params = model.params().values;
  write_pod<std::uint64_t>(out, params.size());
  for (const auto& [name, tensor] : params) {
    write_string(out, name);
    write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(tensor.rank()));
    for (std::size_t d : tensor.shape()) write_pod<std::uint64_t>(out, d);
    out.write(reinterpret_cast<const char*>(tensor.data()),
              static_cast<std::streamsize>(tensor.size() * sizeof(double)));
  }
  if (!out) throw std::runtime_error("checkpoint: write failed for " + path);
}

LoadedCheckpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("checkpoint: cannot open " + path);
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw std::runtime_error("checkpoint: bad magic in " + path);
  }
  std::uint32_t version = read_pod<std::uint32_t>(in);
  if (version != kVersion) {
    throw std::runtime_error("checkpoint: unsupported version " + std::to_string(version));
  }

  EncoderConfig cfg;
  cfg.kind = static_cast<EncoderKind>(read_pod<std::uint32_t>(in));
  cfg.conv_window = read_pod<std::uint64_t>(in);
  cfg.filter_count = read_pod<std::uint64_t>(in);
  cfg.lstm_hidden = read_pod<std::uint64_t>(in);
  cfg.mlp_hidden = read_pod<std::uint64_t>(in);
  cfg.class_count = read_pod<std::uint64_t>(in);
  cfg.sum_bidirectional = read_pod<std::uint8_t>(in) != 0;
  std::uint64_t d_word = read_pod<std::uint64_t>(in);
  FeatureDims dims;
  dims.n_max = read_pod<std::uint64_t>(in);
  dims.d_feat = read_pod<std::uint64_t>(in);
  std::uint64_t symbol_seed = read_pod<std::uint64_t>(in);

  LoadedCheckpoint loaded{ContextModel(cfg, d_word, dims), symbol_seed};
  std::uint64_t count = read_pod<std::uint64_t>(in);
  for (std::uint64_t i = 0; i < count; ++i) {
    std::string name = read_string(in);
    std::uint32_t rank = read_pod<std::uint32_t>(in);
    std::vector<std::size_t> shape(rank);
    for (std::uint32_t d = 0; d < rank; ++d) shape[d] = read_pod<std::uint64_t>(in);
    Tensor t(shape);
    in.read(reinterpret_cast<char*>(t.data()),
            static_cast<std::streamsize>(t.size() * sizeof(double)));
    if (!in) throw std::runtime_error("checkpoint: truncated tensor data");
    loaded.model.params().add(name, std::move(t));
  }
  return loaded;
}

}  // namespace attex
