#include "rsvdlab/checkpoint.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "rsvdlab/error.hpp"

namespace rsvdlab {

namespace {

constexpr std::array<char, 8> kMagic{'R', 'S', 'V', 'D', 'C', 'K', 'P', 'T'};

template <typename T>
void put(std::ostream& out, T value) {
  std::array<char, sizeof(T)> bytes;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    bytes[i] = static_cast<char>((static_cast<std::uint64_t>(value) >> (8 * i)) & 0xffU);
  }
  out.write(bytes.data(), bytes.size());
}

void put_f64(std::ostream& out, double value) { put(out, std::bit_cast<std::uint64_t>(value)); }

template <typename T>
T get(std::istream& in) {
  std::array<unsigned char, sizeof(T)> bytes;
  if (!in.read(reinterpret_cast<char*>(bytes.data()), bytes.size())) {
    throw Error(ErrorKind::CheckpointMismatch, "checkpoint is truncated");
  }
  std::uint64_t value = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) value |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
  return static_cast<T>(value);
}

double get_f64(std::istream& in) { return std::bit_cast<double>(get<std::uint64_t>(in)); }

}  // namespace

void write_checkpoint(std::ostream& out, const Checkpoint& ck) {
  out.write(kMagic.data(), kMagic.size());
  put<std::uint32_t>(out, kCheckpointVersion);
  put<std::uint64_t>(out, ck.master_seed);
  put<std::uint64_t>(out, ck.trials);
  put<std::uint64_t>(out, ck.trials_done);
  put<std::uint8_t>(out, static_cast<std::uint8_t>(ck.dist));
  put<std::uint32_t>(out, ck.m);
  put<std::uint64_t>(out, ck.config_hash);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(ck.blocks.size()));
  for (const auto& b : ck.blocks) {
    for (double x : b.first) put_f64(out, x);
    for (double x : b.second) put_f64(out, x);
    put<std::uint64_t>(out, b.rank_deficient);
    put<std::uint64_t>(out, b.axiom_violations);
  }
  if (!out) throw Error(ErrorKind::IoError, "failed to write checkpoint");
}

Checkpoint read_checkpoint(std::istream& in) {
  std::array<char, 8> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kMagic) {
    throw Error(ErrorKind::CheckpointMismatch, "not a checkpoint file (bad magic)");
  }
  const auto version = get<std::uint32_t>(in);
  if (version != kCheckpointVersion) {
    throw Error(ErrorKind::CheckpointMismatch,
                "unsupported checkpoint version " + std::to_string(version));
  }
  Checkpoint ck;
  ck.master_seed = get<std::uint64_t>(in);
  ck.trials = get<std::uint64_t>(in);
  ck.trials_done = get<std::uint64_t>(in);
  const auto tag = get<std::uint8_t>(in);
  if (tag > static_cast<std::uint8_t>(SketchDistribution::Rademacher)) {
    throw Error(ErrorKind::CheckpointMismatch, "unknown distribution tag in checkpoint");
  }
  ck.dist = static_cast<SketchDistribution>(tag);
  ck.m = get<std::uint32_t>(in);
  if (ck.m == 0 || ck.m > 4096) {
    throw Error(ErrorKind::CheckpointMismatch, "implausible matrix size in checkpoint");
  }
  ck.config_hash = get<std::uint64_t>(in);
  const auto count = get<std::uint32_t>(in);
  const std::size_t mm = static_cast<std::size_t>(ck.m) * ck.m;
  ck.blocks.reserve(count);
  for (std::uint32_t b = 0; b < count; ++b) {
    MomentBlock block = MomentBlock::zeros(ck.m);
    for (std::size_t i = 0; i < mm; ++i) block.first[i] = get_f64(in);
    for (std::size_t i = 0; i < mm; ++i) block.second[i] = get_f64(in);
    block.rank_deficient = get<std::uint64_t>(in);
    block.axiom_violations = get<std::uint64_t>(in);
    ck.blocks.push_back(std::move(block));
  }
  // Block trial counts follow from N and the block size.
  const std::uint64_t bs = block_size_for(ck.trials);
  for (std::uint32_t b = 0; b < count; ++b) {
    const std::uint64_t lo = b * bs;
    ck.blocks[b].trials = std::min(ck.trials, lo + bs) - std::min(ck.trials, lo);
  }
  return ck;
}

void write_checkpoint(const std::filesystem::path& path, const Checkpoint& ck) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::IoError, "cannot open " + tmp.string() + " for writing");
    write_checkpoint(out, ck);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(ErrorKind::IoError, "cannot replace " + path.string() + ": " + ec.message());
}

Checkpoint read_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot open checkpoint " + path.string());
  return read_checkpoint(in);
}

}  // namespace rsvdlab
