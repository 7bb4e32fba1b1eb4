#pragma once

#include <stdexcept>
#include <string>

namespace vfs {

// Every failure an operation can report. The shell maps these to error
// lines; tests compare against them as error classes.
enum class Errc {
    already_exists,
    not_found,
    io_failure,
    bad_geometry,
    out_of_range,
    wrong_length,
    corrupt_image,
    file_too_large,
    not_allocated,
    disk_full,
    exhausted,
    invalid_name,
    duplicate_name,
    no_free_inode,
    map_full,
    bad_fd,
    wrong_mode,
    already_open,
    fd_table_full,
    invalid_mode,
    file_open,
    auth_required,
    auth_failed,
    invalid_choice,
};

const char* errc_name(Errc code);

class VfsError : public std::runtime_error {
public:
    VfsError(Errc code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    Errc code() const { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) {
    throw VfsError(code, what);
}

} // namespace vfs
