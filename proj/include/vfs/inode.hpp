#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "vfs/blockdev.hpp"
#include "vfs/geometry.hpp"

namespace vfs {

inline constexpr int kDirectPointers = 10;
inline constexpr int kSingleIndirectSlot = 10;
inline constexpr int kDoubleIndirectSlot = 11;
inline constexpr int kInodePointers = 12;
inline constexpr std::int32_t kNullPointer = -1;

// File size plus 10 direct, 1 single-indirect and 1 double-indirect
// pointer. 13 x 4 = 52 bytes on disk.
struct Inode {
    std::int32_t file_size = 0;
    std::array<std::int32_t, kInodePointers> ptr;

    Inode() { ptr.fill(kNullPointer); }

    bool operator==(const Inode&) const = default;
};

// Freelists are one byte per slot: 0 = free, 1 = in use.
using Freelist = std::vector<std::uint8_t>;

// Largest logical block index + 1 reachable through the pointer
// hierarchy: 10 + P + P*P with P pointers per block.
std::int64_t max_logical_blocks(const Geometry& geo);

// Lowest free index, marked in use. exhausted when none remain.
std::int32_t allocate_lowest(Freelist& freelist);

// Maps a logical block index to a physical block. With allocate set,
// missing data and pointer blocks on the path are allocated from the
// lowest free index and fresh pointer blocks are initialized to all -1;
// without it, a missing link is not_allocated. Pointer blocks live on
// the device and are read/written immediately.
std::int32_t resolve_block(BlockDevice& dev, const Geometry& geo, Inode& inode,
                           std::int64_t logical_index, bool allocate,
                           Freelist& datablock_freelist);

// How many additional blocks (data plus newly needed pointer blocks)
// growing a file from old_size to new_size bytes will consume. Pure.
std::int64_t blocks_required(std::int64_t old_size, std::int64_t new_size,
                             const Geometry& geo);

// Pointer blocks needed to hold n data blocks.
std::int64_t pointer_blocks_for(std::int64_t data_blocks, const Geometry& geo);

// Frees every data and pointer block of the chain and resets the inode
// to size 0 with all pointers -1. Returns the number of blocks released.
std::int32_t free_chain(BlockDevice& dev, const Geometry& geo, Inode& inode,
                        Freelist& datablock_freelist);

// Shrinks the chain to exactly new_block_count data blocks (>= 1):
// surplus data blocks and no-longer-needed pointer blocks are freed, and
// vacated entries in retained pointer blocks are rewritten to -1.
void truncate_chain(BlockDevice& dev, const Geometry& geo, Inode& inode,
                    std::int64_t new_block_count, Freelist& datablock_freelist);

// Number of data blocks a file of the given size owns (always >= 1; a
// file owns one block from creation).
inline std::int64_t blocks_for_size(std::int64_t size, std::int32_t block_size) {
    std::int64_t n = (size + block_size - 1) / block_size;
    return n > 0 ? n : 1;
}

// Every physical block reachable from the inode, pointer blocks
// included. Used by audits and by free/truncate.
std::vector<std::int32_t> chain_blocks(const BlockDevice& dev,
                                       const Geometry& geo,
                                       const Inode& inode);

} // namespace vfs
