#pragma once

#include <filesystem>
#include <iosfwd>

#include "rsvdlab/consistency.hpp"

namespace rsvdlab {

// Little-endian binary layout (version 1):
//   "RSVDCKPT"  u32 version  u64 master_seed  u64 N  u64 trials_done
//   u8 dist  u32 m  u64 config_hash  u32 block_count
//   per block: m*m f64 first moments, m*m f64 second moments,
//              u64 rank_deficient, u64 axiom_violations
inline constexpr std::uint32_t kCheckpointVersion = 1;

void write_checkpoint(std::ostream& out, const Checkpoint& ck);
Checkpoint read_checkpoint(std::istream& in);

// Writes to a sibling temporary file and renames it into place.
void write_checkpoint(const std::filesystem::path& path, const Checkpoint& ck);
Checkpoint read_checkpoint(const std::filesystem::path& path);

}  // namespace rsvdlab
