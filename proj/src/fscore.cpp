#include "vfs/fscore.hpp"

#include <algorithm>

#include "vfs/security.hpp"

namespace vfs {

const char* mode_name(OpenMode mode) {
    switch (mode) {
    case OpenMode::read: return "read";
    case OpenMode::write: return "write";
    case OpenMode::append: return "append";
    }
    return "?";
}

Mount::Mount(BlockDevice dev, DiskStructures ds)
    : device_(std::move(dev)), structures_(std::move(ds)), mounted_(true) {}

Mount Mount::mount(const std::string& path,
                   const std::optional<Credentials>& credentials) {
    auto [dev, geo] = open_device(path);
    DiskStructures ds = load_structures(dev);
    if (ds.superblock.auth.enabled) {
        if (!credentials)
            fail(Errc::auth_required,
                 "disk '" + path + "' requires a username and password");
        if (!verify(ds.superblock.auth, *credentials))
            fail(Errc::auth_failed, "wrong username or password");
    }
    return Mount(std::move(dev), std::move(ds));
}

void Mount::require_mounted() const {
    if (!mounted_)
        fail(Errc::io_failure, "mount is no longer valid");
}

void Mount::unmount() {
    require_mounted();
    fd_table_.clear();
    store_structures(device_, structures_);
    device_.flush();
    mounted_ = false;
}

std::int32_t Mount::inode_index_of(const std::string& name) const {
    for (const FileMapEntry& e : structures_.file_map)
        if (!e.is_free() && e.name_str() == name)
            return e.inode_index;
    return -1;
}

bool Mount::file_is_open(std::int32_t inode_index) const {
    for (const auto& [fd, of] : fd_table_)
        if (of.inode_index == inode_index)
            return true;
    return false;
}

std::int32_t Mount::free_data_blocks() const {
    const Freelist& fl = structures_.superblock.datablock_freelist;
    return static_cast<std::int32_t>(std::count(fl.begin(), fl.end(), 0));
}

void Mount::create_file(const std::string& name) {
    require_mounted();
    validate_filename(name);
    if (inode_index_of(name) != -1)
        fail(Errc::duplicate_name, "file '" + name + "' already exists");

    Superblock& sb = structures_.superblock;
    auto free_inode = std::find(sb.inode_freelist.begin(),
                                sb.inode_freelist.end(), 0);
    if (free_inode == sb.inode_freelist.end())
        fail(Errc::no_free_inode, "all inodes are in use");
    if (free_data_blocks() == 0)
        fail(Errc::disk_full, "no free data block");
    auto slot = std::find_if(structures_.file_map.begin(),
                             structures_.file_map.end(),
                             [](const FileMapEntry& e) { return e.is_free(); });
    if (slot == structures_.file_map.end())
        fail(Errc::map_full, "file map is full");

    // Lowest free inode, lowest free data block, lowest free map slot.
    *free_inode = 1;
    std::int32_t inode_index =
        static_cast<std::int32_t>(free_inode - sb.inode_freelist.begin());
    Inode& ino = structures_.inodes[static_cast<std::size_t>(inode_index)];
    ino = Inode{};
    ino.ptr[0] = allocate_lowest(sb.datablock_freelist);
    slot->set_name(name);
    slot->inode_index = inode_index;
}

void Mount::delete_file(const std::string& name) {
    require_mounted();
    auto slot = std::find_if(
        structures_.file_map.begin(), structures_.file_map.end(),
        [&](const FileMapEntry& e) { return !e.is_free() && e.name_str() == name; });
    if (slot == structures_.file_map.end())
        fail(Errc::not_found, "no file named '" + name + "'");
    if (file_is_open(slot->inode_index))
        fail(Errc::file_open, "file '" + name + "' is open; close it first");

    Superblock& sb = structures_.superblock;
    std::int32_t inode_index = slot->inode_index;
    free_chain(device_, geometry(),
               structures_.inodes[static_cast<std::size_t>(inode_index)],
               sb.datablock_freelist);
    sb.inode_freelist[static_cast<std::size_t>(inode_index)] = 0;
    *slot = FileMapEntry{};
}

int Mount::open_file(const std::string& name, OpenMode mode) {
    require_mounted();
    if (mode != OpenMode::read && mode != OpenMode::write &&
        mode != OpenMode::append)
        fail(Errc::invalid_mode, "mode must be read, write or append");
    std::int32_t inode_index = inode_index_of(name);
    if (inode_index < 0)
        fail(Errc::not_found, "no file named '" + name + "'");
    if (file_is_open(inode_index))
        fail(Errc::already_open, "file '" + name + "' is already open");
    if (fd_table_.size() >= kMaxOpenFiles)
        fail(Errc::fd_table_full, "all file descriptors are in use");

    int fd = 0;
    while (fd_table_.contains(fd))
        ++fd;
    fd_table_[fd] = OpenFile{fd, inode_index, mode};
    return fd;
}

void Mount::close_file(int fd) {
    require_mounted();
    if (fd_table_.erase(fd) == 0)
        fail(Errc::bad_fd, "file descriptor " + std::to_string(fd) +
                               " is not open");
}

OpenFile& Mount::open_slot(int fd, OpenMode required) {
    require_mounted();
    auto it = fd_table_.find(fd);
    if (it == fd_table_.end())
        fail(Errc::bad_fd,
             "file descriptor " + std::to_string(fd) + " is not open");
    if (it->second.mode != required)
        fail(Errc::wrong_mode,
             "file descriptor " + std::to_string(fd) + " is open in " +
                 mode_name(it->second.mode) + " mode, not " +
                 mode_name(required));
    return it->second;
}

std::vector<std::uint8_t> Mount::read_content(std::int32_t inode_index) {
    require_mounted();
    const Geometry& geo = geometry();
    Inode& ino = structures_.inodes[static_cast<std::size_t>(inode_index)];
    const std::size_t bs = static_cast<std::size_t>(geo.block_size);

    std::vector<std::uint8_t> out;
    out.reserve(static_cast<std::size_t>(ino.file_size));
    std::int64_t remaining = ino.file_size;
    for (std::int64_t b = 0; remaining > 0; ++b) {
        std::int32_t phys =
            resolve_block(device_, geo, ino, b, false,
                          structures_.superblock.datablock_freelist);
        auto bytes = device_.read_block(phys);
        std::size_t n = std::min(bs, static_cast<std::size_t>(remaining));
        out.insert(out.end(), bytes.begin(),
                   bytes.begin() + static_cast<std::ptrdiff_t>(n));
        remaining -= static_cast<std::int64_t>(n);
    }
    return out;
}

std::vector<std::uint8_t> Mount::read_file(int fd) {
    OpenFile& of = open_slot(fd, OpenMode::read);
    return read_content(of.inode_index);
}

void Mount::write_range(Inode& ino, std::int64_t offset,
                        std::span<const std::uint8_t> data) {
    const Geometry& geo = geometry();
    const std::int64_t bs = geo.block_size;
    Freelist& freelist = structures_.superblock.datablock_freelist;

    std::size_t consumed = 0;
    std::int64_t at = offset;
    while (consumed < data.size()) {
        std::int64_t logical = at / bs;
        std::int64_t in_block = at % bs;
        std::size_t n = std::min<std::size_t>(
            static_cast<std::size_t>(bs - in_block), data.size() - consumed);
        std::int32_t phys =
            resolve_block(device_, geo, ino, logical, true, freelist);
        if (n == static_cast<std::size_t>(bs)) {
            device_.write_block(phys, data.subspan(consumed, n));
        } else {
            auto bytes = device_.read_block(phys);
            std::copy_n(data.begin() + static_cast<std::ptrdiff_t>(consumed),
                        n, bytes.begin() + static_cast<std::ptrdiff_t>(in_block));
            device_.write_block(phys, bytes);
        }
        consumed += n;
        at += static_cast<std::int64_t>(n);
    }
}

std::int64_t Mount::write_file(int fd, std::span<const std::uint8_t> data) {
    OpenFile& of = open_slot(fd, OpenMode::write);
    const Geometry& geo = geometry();
    Inode& ino = structures_.inodes[static_cast<std::size_t>(of.inode_index)];

    const std::int64_t new_size = static_cast<std::int64_t>(data.size());
    std::int64_t need = blocks_required(ino.file_size, new_size, geo);
    if (need > free_data_blocks())
        fail(Errc::disk_full, "not enough free blocks");

    std::int64_t old_n = blocks_for_size(ino.file_size, geo.block_size);
    std::int64_t new_n = blocks_for_size(new_size, geo.block_size);
    if (new_n < old_n)
        truncate_chain(device_, geo, ino, new_n,
                       structures_.superblock.datablock_freelist);

    // Overwrite from zero, padding the tail of the last block with zeros.
    const std::size_t bs = static_cast<std::size_t>(geo.block_size);
    std::vector<std::uint8_t> buf(bs);
    std::size_t off = 0;
    for (std::int64_t b = 0; off < data.size(); ++b) {
        std::size_t n = std::min(bs, data.size() - off);
        std::int32_t phys =
            resolve_block(device_, geo, ino, b, true,
                          structures_.superblock.datablock_freelist);
        if (n == bs) {
            device_.write_block(phys, data.subspan(off, n));
        } else {
            std::fill(buf.begin(), buf.end(), 0);
            std::copy_n(data.begin() + static_cast<std::ptrdiff_t>(off), n,
                        buf.begin());
            device_.write_block(phys, buf);
        }
        off += n;
    }

    ino.file_size = static_cast<std::int32_t>(new_size);
    return new_size;
}

std::int64_t Mount::append_file(int fd, std::span<const std::uint8_t> data) {
    OpenFile& of = open_slot(fd, OpenMode::append);
    const Geometry& geo = geometry();
    Inode& ino = structures_.inodes[static_cast<std::size_t>(of.inode_index)];

    const std::int64_t old_size = ino.file_size;
    const std::int64_t new_size =
        old_size + static_cast<std::int64_t>(data.size());
    std::int64_t need = blocks_required(old_size, new_size, geo);
    if (need > free_data_blocks())
        fail(Errc::disk_full, "not enough free blocks");
    if (data.empty())
        return 0;

    write_range(ino, old_size, data);
    ino.file_size = static_cast<std::int32_t>(new_size);
    return static_cast<std::int64_t>(data.size());
}

void Mount::overwrite_content_in_place(std::int32_t inode_index,
                                       std::span<const std::uint8_t> data) {
    require_mounted();
    Inode& ino = structures_.inodes[static_cast<std::size_t>(inode_index)];
    if (static_cast<std::int64_t>(data.size()) != ino.file_size)
        fail(Errc::wrong_length, "in-place rewrite must keep the size");
    write_range(ino, 0, data);
}

std::vector<std::pair<std::string, std::int32_t>> Mount::list_files() const {
    require_mounted();
    std::vector<std::pair<std::string, std::int32_t>> out;
    for (const FileMapEntry& e : structures_.file_map)
        if (!e.is_free())
            out.emplace_back(e.name_str(), e.inode_index);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Mount::OpenEntry> Mount::list_open_files() const {
    require_mounted();
    std::vector<OpenEntry> out;
    for (const auto& [fd, of] : fd_table_) {
        for (const FileMapEntry& e : structures_.file_map)
            if (e.inode_index == of.inode_index) {
                out.push_back({fd, e.name_str(), of.mode});
                break;
            }
    }
    return out;
}

} // namespace vfs
