#include "vfs/errors.hpp"

namespace vfs {

const char* errc_name(Errc code) {
    switch (code) {
    case Errc::already_exists: return "AlreadyExists";
    case Errc::not_found: return "NotFound";
    case Errc::io_failure: return "IoFailure";
    case Errc::bad_geometry: return "BadGeometry";
    case Errc::out_of_range: return "OutOfRange";
    case Errc::wrong_length: return "WrongLength";
    case Errc::corrupt_image: return "CorruptImage";
    case Errc::file_too_large: return "FileTooLarge";
    case Errc::not_allocated: return "NotAllocated";
    case Errc::disk_full: return "DiskFull";
    case Errc::exhausted: return "Exhausted";
    case Errc::invalid_name: return "InvalidName";
    case Errc::duplicate_name: return "DuplicateName";
    case Errc::no_free_inode: return "NoFreeInode";
    case Errc::map_full: return "MapFull";
    case Errc::bad_fd: return "BadFd";
    case Errc::wrong_mode: return "WrongMode";
    case Errc::already_open: return "AlreadyOpen";
    case Errc::fd_table_full: return "FdTableFull";
    case Errc::invalid_mode: return "InvalidMode";
    case Errc::file_open: return "FileOpen";
    case Errc::auth_required: return "AuthRequired";
    case Errc::auth_failed: return "AuthFailed";
    case Errc::invalid_choice: return "InvalidChoice";
    }
    return "Unknown";
}

} // namespace vfs
