#include "vfs/layout.hpp"

#include <algorithm>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <numeric>

#include "vfs/bytes.hpp"

namespace vfs {

Geometry compute_geometry(std::int32_t block_size, std::int32_t disk_blocks,
                          std::int32_t no_of_inodes) {
    BlockDevice::check_geometry(block_size, disk_blocks);
    if (no_of_inodes < 1)
        fail(Errc::bad_geometry, "no_of_inodes must be >= 1");

    auto ceil_div = [](std::int64_t a, std::int64_t b) {
        return static_cast<std::int32_t>((a + b - 1) / b);
    };

    Geometry geo;
    geo.block_size = block_size;
    geo.disk_blocks = disk_blocks;
    geo.no_of_inodes = no_of_inodes;
    geo.sb_blocks =
        ceil_div(serialized_superblock_size(no_of_inodes, disk_blocks),
                 block_size);
    geo.map_blocks = ceil_div(kFileMapEntryBytes * no_of_inodes, block_size);
    geo.inode_start = geo.sb_blocks + geo.map_blocks;
    geo.inode_blocks = ceil_div(kInodeBytes * no_of_inodes, block_size);
    geo.data_start = geo.sb_blocks + geo.map_blocks + geo.inode_blocks;
    geo.available_blocks = disk_blocks - geo.data_start;
    if (geo.available_blocks <= 0)
        fail(Errc::bad_geometry, "no data blocks remain after metadata");
    return geo;
}

std::string FileMapEntry::name_str() const {
    auto end = std::find(name.begin(), name.end(), '\0');
    return std::string(name.begin(), end);
}

void FileMapEntry::set_name(const std::string& s) {
    name.fill('\0');
    std::copy_n(s.begin(),
                std::min(s.size(), kNameFieldBytes - 1), name.begin());
}

std::vector<std::uint8_t> serialize_superblock(const Superblock& sb) {
    const Geometry& g = sb.geometry;
    std::vector<std::uint8_t> out(static_cast<std::size_t>(
        serialized_superblock_size(g.no_of_inodes, g.disk_blocks)));
    std::memcpy(out.data(), sb.magic.data(), 4);
    put_u32le(out.data() + 4, sb.version);
    put_i32le(out.data() + 8, g.block_size);
    put_i32le(out.data() + 12, g.disk_blocks);
    put_i32le(out.data() + 16, g.no_of_inodes);
    put_i32le(out.data() + 20, g.sb_blocks);
    put_i32le(out.data() + 24, g.map_blocks);
    put_i32le(out.data() + 28, g.inode_start);
    put_i32le(out.data() + 32, g.inode_blocks);
    put_i32le(out.data() + 36, g.data_start);
    put_i32le(out.data() + 40, g.available_blocks);
    out[44] = sb.auth.enabled;
    std::memcpy(out.data() + 45, sb.auth.username.data(), kNameFieldBytes);
    put_u64le(out.data() + 77, sb.auth.salt);
    put_u64le(out.data() + 85, sb.auth.password_hash);
    put_u32le(out.data() + 93, sb.auth.iterations);
    std::copy(sb.inode_freelist.begin(), sb.inode_freelist.end(),
              out.begin() + kSuperblockHeaderBytes);
    std::copy(sb.datablock_freelist.begin(), sb.datablock_freelist.end(),
              out.begin() + kSuperblockHeaderBytes + g.no_of_inodes);
    return out;
}

Superblock deserialize_superblock(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < kSuperblockHeaderBytes)
        fail(Errc::corrupt_image, "superblock too short");
    Superblock sb;
    std::memcpy(sb.magic.data(), bytes.data(), 4);
    if (sb.magic != kMagic)
        fail(Errc::corrupt_image, "bad magic");
    sb.version = get_u32le(bytes.data() + 4);
    if (sb.version != kFormatVersion)
        fail(Errc::corrupt_image,
             "unsupported version " + std::to_string(sb.version));

    std::int32_t block_size = get_i32le(bytes.data() + 8);
    std::int32_t disk_blocks = get_i32le(bytes.data() + 12);
    std::int32_t no_of_inodes = get_i32le(bytes.data() + 16);
    Geometry geo;
    try {
        geo = compute_geometry(block_size, disk_blocks, no_of_inodes);
    } catch (const VfsError&) {
        fail(Errc::corrupt_image, "invalid geometry in superblock");
    }
    Geometry stored = geo;
    stored.sb_blocks = get_i32le(bytes.data() + 20);
    stored.map_blocks = get_i32le(bytes.data() + 24);
    stored.inode_start = get_i32le(bytes.data() + 28);
    stored.inode_blocks = get_i32le(bytes.data() + 32);
    stored.data_start = get_i32le(bytes.data() + 36);
    stored.available_blocks = get_i32le(bytes.data() + 40);
    // Derived fields are persisted and recomputed; they must agree.
    if (stored != geo)
        fail(Errc::corrupt_image, "derived geometry fields disagree");
    sb.geometry = geo;

    if (bytes.size() != static_cast<std::size_t>(serialized_superblock_size(
                            no_of_inodes, disk_blocks)))
        fail(Errc::corrupt_image, "superblock length mismatch");

    sb.auth.enabled = bytes[44];
    if (sb.auth.enabled > 1)
        fail(Errc::corrupt_image, "invalid auth flag");
    std::memcpy(sb.auth.username.data(), bytes.data() + 45, kNameFieldBytes);
    sb.auth.salt = get_u64le(bytes.data() + 77);
    sb.auth.password_hash = get_u64le(bytes.data() + 85);
    sb.auth.iterations = get_u32le(bytes.data() + 93);

    auto lists = bytes.subspan(kSuperblockHeaderBytes);
    sb.inode_freelist.assign(lists.begin(), lists.begin() + no_of_inodes);
    sb.datablock_freelist.assign(lists.begin() + no_of_inodes, lists.end());
    for (auto b : sb.inode_freelist)
        if (b > 1)
            fail(Errc::corrupt_image, "invalid inode freelist byte");
    for (auto b : sb.datablock_freelist)
        if (b > 1)
            fail(Errc::corrupt_image, "invalid datablock freelist byte");
    for (std::int32_t i = 0; i < geo.data_start; ++i)
        if (sb.datablock_freelist[static_cast<std::size_t>(i)] != 1)
            fail(Errc::corrupt_image, "metadata block marked free");
    return sb;
}

std::vector<std::uint8_t> serialize_inode_table(std::span<const Inode> inodes) {
    std::vector<std::uint8_t> out(inodes.size() *
                                  static_cast<std::size_t>(kInodeBytes));
    std::uint8_t* at = out.data();
    for (const Inode& ino : inodes) {
        put_i32le(at, ino.file_size);
        for (int i = 0; i < kInodePointers; ++i)
            put_i32le(at + 4 + 4 * i, ino.ptr[static_cast<std::size_t>(i)]);
        at += kInodeBytes;
    }
    return out;
}

std::vector<Inode> deserialize_inode_table(std::span<const std::uint8_t> bytes,
                                           std::int32_t no_of_inodes) {
    if (bytes.size() != static_cast<std::size_t>(kInodeBytes * no_of_inodes))
        fail(Errc::corrupt_image, "inode table length mismatch");
    std::vector<Inode> inodes(static_cast<std::size_t>(no_of_inodes));
    const std::uint8_t* at = bytes.data();
    for (Inode& ino : inodes) {
        ino.file_size = get_i32le(at);
        for (int i = 0; i < kInodePointers; ++i)
            ino.ptr[static_cast<std::size_t>(i)] = get_i32le(at + 4 + 4 * i);
        at += kInodeBytes;
    }
    return inodes;
}

std::vector<std::uint8_t> serialize_file_map(
    std::span<const FileMapEntry> map) {
    std::vector<std::uint8_t> out(map.size() *
                                  static_cast<std::size_t>(kFileMapEntryBytes));
    std::uint8_t* at = out.data();
    for (const FileMapEntry& e : map) {
        std::memcpy(at, e.name.data(), kNameFieldBytes);
        put_i32le(at + kNameFieldBytes, e.inode_index);
        at += kFileMapEntryBytes;
    }
    return out;
}

std::vector<FileMapEntry> deserialize_file_map(
    std::span<const std::uint8_t> bytes, std::int32_t no_of_inodes) {
    if (bytes.size() !=
        static_cast<std::size_t>(kFileMapEntryBytes * no_of_inodes))
        fail(Errc::corrupt_image, "file map length mismatch");
    std::vector<FileMapEntry> map(static_cast<std::size_t>(no_of_inodes));
    const std::uint8_t* at = bytes.data();
    for (FileMapEntry& e : map) {
        std::memcpy(e.name.data(), at, kNameFieldBytes);
        e.inode_index = get_i32le(at + kNameFieldBytes);
        at += kFileMapEntryBytes;
    }
    return map;
}

namespace {

// Writes `bytes` into the block range starting at first_block, padding
// the tail of the last block with zeros.
void write_region(BlockDevice& dev, std::int32_t first_block,
                  std::span<const std::uint8_t> bytes) {
    const std::size_t bs = static_cast<std::size_t>(dev.block_size());
    std::vector<std::uint8_t> buf(bs);
    std::int32_t block = first_block;
    for (std::size_t off = 0; off < bytes.size(); off += bs, ++block) {
        std::size_t n = std::min(bs, bytes.size() - off);
        std::fill(buf.begin(), buf.end(), 0);
        std::copy_n(bytes.begin() + static_cast<std::ptrdiff_t>(off), n,
                    buf.begin());
        dev.write_block(block, buf);
    }
}

std::vector<std::uint8_t> read_region(BlockDevice& dev,
                                      std::int32_t first_block,
                                      std::int64_t byte_count) {
    const std::size_t bs = static_cast<std::size_t>(dev.block_size());
    std::vector<std::uint8_t> out;
    out.reserve(static_cast<std::size_t>(byte_count));
    std::int32_t block = first_block;
    while (out.size() < static_cast<std::size_t>(byte_count)) {
        auto bytes = dev.read_block(block++);
        std::size_t n = std::min(
            bs, static_cast<std::size_t>(byte_count) - out.size());
        out.insert(out.end(), bytes.begin(),
                   bytes.begin() + static_cast<std::ptrdiff_t>(n));
    }
    return out;
}

} // namespace

void format_disk(BlockDevice& dev, const Geometry& geo) {
    Superblock sb;
    sb.geometry = geo;
    sb.inode_freelist.assign(static_cast<std::size_t>(geo.no_of_inodes), 0);
    sb.datablock_freelist.assign(static_cast<std::size_t>(geo.disk_blocks), 0);
    for (std::int32_t i = 0; i < geo.data_start; ++i)
        sb.datablock_freelist[static_cast<std::size_t>(i)] = 1;

    DiskStructures ds;
    ds.superblock = std::move(sb);
    ds.inodes.assign(static_cast<std::size_t>(geo.no_of_inodes), Inode{});
    ds.file_map.assign(static_cast<std::size_t>(geo.no_of_inodes),
                       FileMapEntry{});
    store_structures(dev, ds);
    dev.flush();
}

void store_structures(BlockDevice& dev, const DiskStructures& ds) {
    const Geometry& geo = ds.superblock.geometry;
    write_region(dev, 0, serialize_superblock(ds.superblock));
    write_region(dev, geo.sb_blocks, serialize_file_map(ds.file_map));
    write_region(dev, geo.inode_start, serialize_inode_table(ds.inodes));
}

DiskStructures load_structures(BlockDevice& dev) {
    // The superblock states its own length; read the header first.
    auto first = dev.read_block(0);
    if (first.size() < 20)
        fail(Errc::corrupt_image, "block too small for superblock header");
    std::int32_t no_of_inodes = get_i32le(first.data() + 16);
    std::int32_t disk_blocks = get_i32le(first.data() + 12);
    if (no_of_inodes < 1 || disk_blocks != dev.disk_blocks())
        fail(Errc::corrupt_image, "superblock disagrees with image size");
    std::int64_t sb_size = serialized_superblock_size(no_of_inodes,
                                                      disk_blocks);

    DiskStructures ds;
    ds.superblock = deserialize_superblock(read_region(dev, 0, sb_size));
    const Geometry& geo = ds.superblock.geometry;
    if (geo.block_size != dev.block_size() ||
        geo.disk_blocks != dev.disk_blocks())
        fail(Errc::corrupt_image, "superblock disagrees with image size");
    ds.file_map = deserialize_file_map(
        read_region(dev, geo.sb_blocks, kFileMapEntryBytes * geo.no_of_inodes),
        geo.no_of_inodes);
    ds.inodes = deserialize_inode_table(
        read_region(dev, geo.inode_start, kInodeBytes * geo.no_of_inodes),
        geo.no_of_inodes);
    return ds;
}

std::pair<BlockDevice, Geometry> open_device(const std::string& path) {
    if (!std::filesystem::exists(path))
        fail(Errc::not_found, "disk '" + path + "' does not exist");

    // Peek at the fixed-offset header fields. The minimum block size is
    // 64, so 20 bytes always sit inside block 0.
    std::ifstream in(path, std::ios::binary);
    std::uint8_t header[20] = {};
    in.read(reinterpret_cast<char*>(header), sizeof(header));
    if (in.gcount() != sizeof(header))
        fail(Errc::corrupt_image, "image too short for a superblock");
    if (std::memcmp(header, kMagic.data(), 4) != 0)
        fail(Errc::corrupt_image, "bad magic");
    if (get_u32le(header + 4) != kFormatVersion)
        fail(Errc::corrupt_image, "unsupported version");
    std::int32_t block_size = get_i32le(header + 8);
    std::int32_t disk_blocks = get_i32le(header + 12);
    std::int32_t no_of_inodes = get_i32le(header + 16);
    in.close();

    Geometry geo;
    try {
        geo = compute_geometry(block_size, disk_blocks, no_of_inodes);
    } catch (const VfsError&) {
        fail(Errc::corrupt_image, "invalid geometry in superblock");
    }
    BlockDevice dev;
    try {
        dev = BlockDevice::open_image(path, block_size, disk_blocks);
    } catch (const VfsError& e) {
        if (e.code() == Errc::bad_geometry)
            fail(Errc::corrupt_image, "invalid geometry in superblock");
        throw;
    }
    return {std::move(dev), geo};
}

} // namespace vfs
