#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "vfs/blockdev.hpp"
#include "vfs/geometry.hpp"
#include "vfs/inode.hpp"

namespace vfs {

inline constexpr std::array<char, 4> kMagic = {'V', 'F', 'S', 'D'};
inline constexpr std::uint32_t kFormatVersion = 1;
inline constexpr std::size_t kNameFieldBytes = 32;
inline constexpr std::size_t kMaxNameChars = 30;
inline constexpr std::uint32_t kKdfIterations = 10000;

struct AuthRecord {
    std::uint8_t enabled = 0;
    std::array<char, kNameFieldBytes> username{}; // zero-padded
    std::uint64_t salt = 0;
    std::uint64_t password_hash = 0;
    std::uint32_t iterations = 0;

    bool operator==(const AuthRecord&) const = default;
};

struct Superblock {
    std::array<char, 4> magic = kMagic;
    std::uint32_t version = kFormatVersion;
    Geometry geometry;
    AuthRecord auth;
    Freelist inode_freelist;     // no_of_inodes bytes
    Freelist datablock_freelist; // disk_blocks bytes

    bool operator==(const Superblock&) const = default;
};

// Filename <-> inode binding. A slot is free iff inode_index == -1.
struct FileMapEntry {
    std::array<char, kNameFieldBytes> name{}; // zero-padded
    std::int32_t inode_index = -1;

    bool operator==(const FileMapEntry&) const = default;

    std::string name_str() const;
    void set_name(const std::string& s);
    bool is_free() const { return inode_index == -1; }
};

// Byte layout, all integers little-endian:
//   0 magic "VFSD"; 4 version; 8 block_size; 12 disk_blocks;
//   16 no_of_inodes; 20 sb_blocks; 24 map_blocks; 28 inode_start;
//   32 inode_blocks; 36 data_start; 40 available_blocks;
//   44 auth.enabled; 45 username[32]; 77 salt; 85 password_hash;
//   93 iterations; 97 inode_freelist; 97+no_of_inodes datablock_freelist.
std::vector<std::uint8_t> serialize_superblock(const Superblock& sb);
Superblock deserialize_superblock(std::span<const std::uint8_t> bytes);

// Inode i occupies [52*i, 52*i+52): file_size then 12 pointers.
std::vector<std::uint8_t> serialize_inode_table(std::span<const Inode> inodes);
std::vector<Inode> deserialize_inode_table(std::span<const std::uint8_t> bytes,
                                           std::int32_t no_of_inodes);

// Entry i occupies [36*i, 36*i+36): name then inode_index.
std::vector<std::uint8_t> serialize_file_map(std::span<const FileMapEntry> map);
std::vector<FileMapEntry> deserialize_file_map(
    std::span<const std::uint8_t> bytes, std::int32_t no_of_inodes);

struct DiskStructures {
    Superblock superblock;
    std::vector<Inode> inodes;
    std::vector<FileMapEntry> file_map;

    bool operator==(const DiskStructures&) const = default;
};

// Writes a fresh superblock, empty file map and all-free inode table
// into a newly created (all-zero) device. Metadata blocks are marked in
// use in the datablock freelist; everything else is free.
void format_disk(BlockDevice& dev, const Geometry& geo);

// Reads the metadata block ranges back into memory, revalidating magic,
// version and geometry against the image.
DiskStructures load_structures(BlockDevice& dev);

// Writes the structures back into their block ranges (the inverse of
// load_structures). Does not flush.
void store_structures(BlockDevice& dev, const DiskStructures& ds);

// Opens an existing image: peeks at the superblock header to learn the
// geometry, validates the file length, and returns a configured device.
std::pair<BlockDevice, Geometry> open_device(const std::string& path);

} // namespace vfs
