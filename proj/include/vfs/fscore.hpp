#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vfs/layout.hpp"
#include "vfs/security.hpp"

namespace vfs {

inline constexpr int kMaxOpenFiles = 32;

enum class OpenMode { read = 1, write = 2, append = 3 };

const char* mode_name(OpenMode mode);

struct OpenFile {
    int fd = -1;
    std::int32_t inode_index = -1;
    OpenMode mode = OpenMode::read;
};

// A mounted filesystem session. Metadata lives in memory while mounted
// and is written back on unmount; data and pointer blocks go to the
// device immediately. Single owner, operations strictly serialized.
class Mount {
public:
    static Mount mount(const std::string& path,
                       const std::optional<Credentials>& credentials = {});

    // Closes all fds, writes the structures back and flushes. The mount
    // is invalid afterwards.
    void unmount();

    void create_file(const std::string& name);
    void delete_file(const std::string& name);
    int open_file(const std::string& name, OpenMode mode);
    void close_file(int fd);

    std::vector<std::uint8_t> read_file(int fd);
    // Overwrite-from-zero with truncation; all-or-nothing. Returns the
    // byte count written.
    std::int64_t write_file(int fd, std::span<const std::uint8_t> data);
    // Extends at end; all-or-nothing.
    std::int64_t append_file(int fd, std::span<const std::uint8_t> data);

    // All mapped files, sorted lexicographically by name.
    std::vector<std::pair<std::string, std::int32_t>> list_files() const;

    struct OpenEntry {
        int fd;
        std::string name;
        OpenMode mode;
    };
    // Open fds, ascending.
    std::vector<OpenEntry> list_open_files() const;

    bool is_mounted() const { return mounted_; }
    const Geometry& geometry() const { return structures_.superblock.geometry; }
    const DiskStructures& structures() const { return structures_; }
    Superblock& superblock() { return structures_.superblock; }
    BlockDevice& device() { return device_; }

    std::int32_t inode_index_of(const std::string& name) const; // -1 if absent
    bool file_is_open(std::int32_t inode_index) const;
    std::int32_t free_data_blocks() const;

    // Whole-file content access by inode, independent of the fd table.
    // Used by the encryption path; rewrites must keep the size.
    std::vector<std::uint8_t> read_content(std::int32_t inode_index);
    void overwrite_content_in_place(std::int32_t inode_index,
                                    std::span<const std::uint8_t> data);

private:
    Mount(BlockDevice dev, DiskStructures ds);

    void require_mounted() const;
    OpenFile& open_slot(int fd, OpenMode required);
    void write_range(Inode& inode, std::int64_t offset,
                     std::span<const std::uint8_t> data);

    BlockDevice device_;
    DiskStructures structures_;
    std::map<int, OpenFile> fd_table_;
    bool mounted_ = false;
};

} // namespace vfs
