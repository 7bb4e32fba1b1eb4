#include "vfs/blockdev.hpp"

#include <cerrno>
#include <cstdio>
#include <cstring>
#include <filesystem>

namespace vfs {

namespace {

[[noreturn]] void io_fail(const std::string& what) {
    fail(Errc::io_failure, what + ": " + std::strerror(errno));
}

} // namespace

void BlockDevice::FileCloser::operator()(std::FILE* f) const {
    if (f)
        std::fclose(f);
}

BlockDevice::BlockDevice(const std::string& path, std::int32_t block_size,
                         std::int32_t disk_blocks, std::FILE* file)
    : path_(path), block_size_(block_size), disk_blocks_(disk_blocks),
      file_(file) {}

void BlockDevice::check_geometry(std::int32_t block_size,
                                 std::int32_t disk_blocks) {
    if (block_size < 64 || block_size % 4 != 0)
        fail(Errc::bad_geometry,
             "block_size must be >= 64 and a multiple of 4");
    if (disk_blocks < 64)
        fail(Errc::bad_geometry, "disk_blocks must be >= 64");
}

BlockDevice BlockDevice::create_image(const std::string& path,
                                      std::int32_t block_size,
                                      std::int32_t disk_blocks) {
    check_geometry(block_size, disk_blocks);
    if (std::filesystem::exists(path))
        fail(Errc::already_exists, "disk '" + path + "' already exists");

    std::FILE* f = std::fopen(path.c_str(), "w+b");
    if (!f)
        io_fail("cannot create '" + path + "'");
    BlockDevice dev(path, block_size, disk_blocks, f);

    // Zero fill one block-sized buffer at a time.
    std::vector<std::uint8_t> zero(static_cast<std::size_t>(block_size), 0);
    for (std::int32_t i = 0; i < disk_blocks; ++i) {
        if (std::fwrite(zero.data(), 1, zero.size(), f) != zero.size())
            io_fail("zero fill of '" + path + "' failed");
    }
    dev.flush();
    return dev;
}

BlockDevice BlockDevice::open_image(const std::string& path,
                                    std::int32_t block_size,
                                    std::int32_t disk_blocks) {
    check_geometry(block_size, disk_blocks);
    if (!std::filesystem::exists(path))
        fail(Errc::not_found, "disk '" + path + "' does not exist");

    std::FILE* f = std::fopen(path.c_str(), "r+b");
    if (!f)
        io_fail("cannot open '" + path + "'");
    BlockDevice dev(path, block_size, disk_blocks, f);

    std::error_code ec;
    auto size = std::filesystem::file_size(path, ec);
    if (ec)
        io_fail("cannot stat '" + path + "'");
    if (size != static_cast<std::uintmax_t>(block_size) *
                    static_cast<std::uintmax_t>(disk_blocks))
        fail(Errc::corrupt_image,
             "image length does not match its geometry");
    return dev;
}

void BlockDevice::check_index(std::int32_t index) const {
    if (!is_open())
        fail(Errc::io_failure, "device is not open");
    if (index < 0 || index >= disk_blocks_)
        fail(Errc::out_of_range,
             "block index " + std::to_string(index) + " not in [0, " +
                 std::to_string(disk_blocks_) + ")");
}

std::vector<std::uint8_t> BlockDevice::read_block(std::int32_t index) const {
    check_index(index);
    std::vector<std::uint8_t> buf(static_cast<std::size_t>(block_size_));
    std::FILE* f = file_.get();
    if (std::fseek(f, static_cast<long>(index) * block_size_, SEEK_SET) != 0)
        io_fail("seek failed");
    if (std::fread(buf.data(), 1, buf.size(), f) != buf.size())
        io_fail("block read failed");
    return buf;
}

void BlockDevice::write_block(std::int32_t index,
                              std::span<const std::uint8_t> bytes) {
    check_index(index);
    if (bytes.size() != static_cast<std::size_t>(block_size_))
        fail(Errc::wrong_length,
             "write of " + std::to_string(bytes.size()) +
                 " bytes, expected " + std::to_string(block_size_));
    std::FILE* f = file_.get();
    if (std::fseek(f, static_cast<long>(index) * block_size_, SEEK_SET) != 0)
        io_fail("seek failed");
    if (std::fwrite(bytes.data(), 1, bytes.size(), f) != bytes.size())
        io_fail("block write failed");
}

void BlockDevice::flush() {
    if (!is_open())
        fail(Errc::io_failure, "device is not open");
    if (std::fflush(file_.get()) != 0)
        io_fail("flush failed");
}

} // namespace vfs
