#pragma once

#include <cstdint>

#include "vfs/errors.hpp"

namespace vfs {

// On-disk shape of a filesystem image. The three primary constants are
// configuration; the remaining fields are derived by compute_geometry
// and also persisted in the superblock (revalidated on load).
struct Geometry {
    std::int32_t block_size = 0;
    std::int32_t disk_blocks = 0;
    std::int32_t no_of_inodes = 0;

    std::int32_t sb_blocks = 0;        // blocks holding the superblock
    std::int32_t map_blocks = 0;       // blocks holding the file-inode map
    std::int32_t inode_start = 0;      // first inode-table block
    std::int32_t inode_blocks = 0;     // blocks holding the inode table
    std::int32_t data_start = 0;       // first data block
    std::int32_t available_blocks = 0; // data blocks

    std::int32_t pointers_per_block() const { return block_size / 4; }

    bool operator==(const Geometry&) const = default;
};

// Serialized record sizes. The superblock is 97 header bytes plus one
// byte per inode and one per disk block for the freelists.
inline constexpr std::int64_t kInodeBytes = 52;
inline constexpr std::int64_t kFileMapEntryBytes = 36;
inline constexpr std::int64_t kSuperblockHeaderBytes = 97;

inline std::int64_t serialized_superblock_size(std::int32_t no_of_inodes,
                                               std::int32_t disk_blocks) {
    return kSuperblockHeaderBytes + no_of_inodes + disk_blocks;
}

// Derives the block-layout fields from the three primary constants.
// bad_geometry if parameters are out of bounds or no data blocks remain.
Geometry compute_geometry(std::int32_t block_size, std::int32_t disk_blocks,
                          std::int32_t no_of_inodes);

// Default image shape: 16 MiB with 128 inodes.
inline constexpr std::int32_t kDefaultBlockSize = 4096;
inline constexpr std::int32_t kDefaultDiskBlocks = 4096;
inline constexpr std::int32_t kDefaultInodes = 128;

} // namespace vfs
