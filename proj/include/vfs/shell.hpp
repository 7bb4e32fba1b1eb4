#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "vfs/geometry.hpp"

namespace vfs {

// The two-level menu loop: a top menu for disk creation/mount/exit and
// a file menu while a disk is mounted. Input may come from a terminal
// or from a script file; in script mode consumed lines are echoed so a
// transcript reads like an interactive session.
class Shell {
public:
    Shell(std::istream& in, std::ostream& out, bool echo_input,
          std::int32_t block_size = kDefaultBlockSize,
          std::int32_t disk_blocks = kDefaultDiskBlocks,
          std::int32_t no_of_inodes = kDefaultInodes);

    // Runs until menu choice 9 at the top level or end of input.
    // Returns the process exit code: 0 on a clean exit, 1 when host I/O
    // fails underneath.
    int run();

private:
    std::optional<std::string> read_line();
    std::optional<std::string> prompt(const std::string& text);
    std::string read_text_until_sentinel_();
    bool file_menu_loop(class Mount& mount); // false = end of input

    std::istream& in_;
    std::ostream& out_;
    bool echo_;
    std::int32_t block_size_;
    std::int32_t disk_blocks_;
    std::int32_t no_of_inodes_;
};

// Reads lines until one that is exactly "EOF"; the sentinel is not
// included. Retained lines are joined with single newlines, with one
// trailing newline when at least one line was read. End of input before
// the sentinel counts as the sentinel.
std::string read_text_until_sentinel(std::istream& in);

// `vfs [--script <path>] [--block-size N] [--disk-blocks N] [--inodes N]`
int run_cli(int argc, char** argv);

} // namespace vfs
