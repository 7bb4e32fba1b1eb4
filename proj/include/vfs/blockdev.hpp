#pragma once

#include <cstdint>
#include <cstdio>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "vfs/errors.hpp"

namespace vfs {

// A single host file emulating a block-addressable disk. All I/O is in
// whole blocks; the file length is always block_size * disk_blocks.
//
// A device has a single owner. The handle may move between threads but
// must never be used from two threads at once. Opening the same image
// from two processes is undefined behavior by contract.
class BlockDevice {
public:
    BlockDevice() = default;

    // Creates the image file and zero-fills it one block-sized buffer at
    // a time. Fails with already_exists if the path names an existing
    // file, bad_geometry if the parameters are out of bounds.
    static BlockDevice create_image(const std::string& path,
                                    std::int32_t block_size,
                                    std::int32_t disk_blocks);

    // Opens an existing image whose geometry the caller already knows
    // (layout::open_device reads it from the image header). Fails with
    // corrupt_image if the file length does not match.
    static BlockDevice open_image(const std::string& path,
                                  std::int32_t block_size,
                                  std::int32_t disk_blocks);

    // bad_geometry unless block_size >= 64, block_size % 4 == 0 and
    // disk_blocks >= 64.
    static void check_geometry(std::int32_t block_size,
                               std::int32_t disk_blocks);

    std::vector<std::uint8_t> read_block(std::int32_t index) const;
    void write_block(std::int32_t index, std::span<const std::uint8_t> bytes);
    void flush();

    bool is_open() const { return file_ != nullptr; }
    const std::string& path() const { return path_; }
    std::int32_t block_size() const { return block_size_; }
    std::int32_t disk_blocks() const { return disk_blocks_; }

private:
    struct FileCloser {
        void operator()(std::FILE* f) const;
    };

    BlockDevice(const std::string& path, std::int32_t block_size,
                std::int32_t disk_blocks, std::FILE* file);

    void check_index(std::int32_t index) const;

    std::string path_;
    std::int32_t block_size_ = 0;
    std::int32_t disk_blocks_ = 0;
    std::unique_ptr<std::FILE, FileCloser> file_;
};

} // namespace vfs
