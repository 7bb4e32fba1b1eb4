#include "vfs/shell.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <string>

#include "vfs/fscore.hpp"
#include "vfs/layout.hpp"
#include "vfs/security.hpp"

namespace vfs {

namespace {

const char* const kTopMenu = "1 : create disk\n"
                             "2 : mount disk\n"
                             "9 : exit\n";

const char* const kFileMenu = "=====\n"
                              "1 : create file\n"
                              "2 : open file\n"
                              "3 : read file\n"
                              "4 : write file\n"
                              "5 : append file\n"
                              "6 : close file\n"
                              "7 : delete file\n"
                              "8 : list of files\n"
                              "9 : list of opened files\n"
                              "10: unmount\n"
                              "=====\n";

std::string strip_cr(std::string line) {
    if (!line.empty() && line.back() == '\r')
        line.pop_back();
    return line;
}

} // namespace

std::string read_text_until_sentinel(std::istream& in) {
    std::string text;
    std::string line;
    while (std::getline(in, line)) {
        line = strip_cr(std::move(line));
        if (line == "EOF")
            break;
        text += line;
        text += '\n';
    }
    return text;
}

Shell::Shell(std::istream& in, std::ostream& out, bool echo_input,
             std::int32_t block_size, std::int32_t disk_blocks,
             std::int32_t no_of_inodes)
    : in_(in), out_(out), echo_(echo_input), block_size_(block_size),
      disk_blocks_(disk_blocks), no_of_inodes_(no_of_inodes) {}

std::optional<std::string> Shell::read_line() {
    std::string line;
    if (!std::getline(in_, line))
        return std::nullopt;
    line = strip_cr(std::move(line));
    if (echo_)
        out_ << line << '\n';
    return line;
}

std::optional<std::string> Shell::prompt(const std::string& text) {
    out_ << text << '\n';
    return read_line();
}

std::string Shell::read_text_until_sentinel_() {
    std::string text;
    while (true) {
        auto line = read_line();
        if (!line) {
            out_ << "[end of input before EOF sentinel]\n";
            break;
        }
        if (*line == "EOF")
            break;
        text += *line;
        text += '\n';
    }
    return text;
}

bool Shell::file_menu_loop(Mount& mount) {
    auto parse_fd = [](const std::string& text) {
        std::set<int> any;
        for (int i = 0; i < 100; ++i)
            any.insert(i);
        return parse_menu_choice(text, any);
    };

    while (true) {
        out_ << kFileMenu;
        auto line = read_line();
        if (!line) {
            mount.unmount();
            return false;
        }
        try {
            int choice = parse_menu_choice(
                *line, {1, 2, 3, 4, 5, 6, 7, 8, 9, 10});
            switch (choice) {
            case 1: {
                auto name = prompt("Enter filename to create :");
                if (!name) { mount.unmount(); return false; }
                mount.create_file(*name);
                out_ << "File Successfully Created :)\n";
                break;
            }
            case 2: {
                auto name = prompt("Enter filename to open :");
                if (!name) { mount.unmount(); return false; }
                auto mode_line =
                    prompt("Enter mode (1 : read, 2 : write, 3 : append) :");
                if (!mode_line) { mount.unmount(); return false; }
                int mode = parse_menu_choice(*mode_line, {1, 2, 3});
                int fd = mount.open_file(*name, static_cast<OpenMode>(mode));
                out_ << "File " << *name
                     << " opened with file descriptor : " << fd << '\n';
                break;
            }
            case 3: {
                auto fd_line = prompt("Enter filedescriptor to read :");
                if (!fd_line) { mount.unmount(); return false; }
                auto content = mount.read_file(parse_fd(*fd_line));
                out_.write(reinterpret_cast<const char*>(content.data()),
                           static_cast<std::streamsize>(content.size()));
                if (content.empty() || content.back() != '\n')
                    out_ << '\n';
                break;
            }
            case 4: {
                auto fd_line = prompt("Enter filedescriptor to write :");
                if (!fd_line) { mount.unmount(); return false; }
                int fd = parse_fd(*fd_line);
                out_ << "Enter file content :\n";
                std::string text = read_text_until_sentinel_();
                auto n = mount.write_file(
                    fd, std::span<const std::uint8_t>(
                            reinterpret_cast<const std::uint8_t*>(text.data()),
                            text.size()));
                out_ << n << " bytes written.\n";
                out_ << "File Written Successfully.\n";
                break;
            }
            case 5: {
                auto fd_line = prompt("Enter filedescriptor to append :");
                if (!fd_line) { mount.unmount(); return false; }
                int fd = parse_fd(*fd_line);
                out_ << "Enter file content :\n";
                std::string text = read_text_until_sentinel_();
                auto n = mount.append_file(
                    fd, std::span<const std::uint8_t>(
                            reinterpret_cast<const std::uint8_t*>(text.data()),
                            text.size()));
                out_ << n << " bytes written.\n";
                out_ << "File Appended Successfully.\n";
                break;
            }
            case 6: {
                auto fd_line = prompt("Enter filedescriptor to close :");
                if (!fd_line) { mount.unmount(); return false; }
                mount.close_file(parse_fd(*fd_line));
                out_ << "File Closed Successfully.\n";
                break;
            }
            case 7: {
                auto name = prompt("Enter filename to delete :");
                if (!name) { mount.unmount(); return false; }
                mount.delete_file(*name);
                out_ << "File Deleted Successfully.\n";
                break;
            }
            case 8: {
                out_ << "List of All files\n";
                for (const auto& [name, inode] : mount.list_files())
                    out_ << name << " with inode : " << inode << '\n';
                break;
            }
            case 9: {
                out_ << "List of Opened files\n";
                for (const auto& e : mount.list_open_files())
                    out_ << e.name << " with file descriptor : " << e.fd
                         << ", mode : " << mode_name(e.mode) << '\n';
                break;
            }
            case 10:
                mount.unmount();
                out_ << "Disk Unmounted Successfully.\n";
                return true;
            }
        } catch (const VfsError& e) {
            out_ << "Error : " << e.what() << '\n';
        } catch (const std::exception& e) {
            out_ << "Error : " << e.what() << '\n';
        }
    }
}

int Shell::run() {
    while (true) {
        out_ << kTopMenu;
        auto line = read_line();
        if (!line)
            return 0;
        try {
            int choice = parse_menu_choice(*line, {1, 2, 9});
            switch (choice) {
            case 1: {
                auto name = prompt("Enter diskname :");
                if (!name)
                    return 0;
                auto parent = std::filesystem::path(*name).parent_path();
                if (!parent.empty())
                    std::filesystem::create_directories(parent);
                Geometry geo = compute_geometry(block_size_, disk_blocks_,
                                                no_of_inodes_);
                BlockDevice dev = BlockDevice::create_image(
                    *name, block_size_, disk_blocks_);
                format_disk(dev, geo);
                out_ << "Disk Created Successfully.\n";
                break;
            }
            case 2: {
                auto name = prompt("Enter diskname :");
                if (!name)
                    return 0;
                std::optional<Mount> mount;
                try {
                    mount = Mount::mount(*name);
                } catch (const VfsError& e) {
                    if (e.code() != Errc::auth_required)
                        throw;
                    auto user = prompt("Enter username :");
                    if (!user)
                        return 0;
                    auto pass = prompt("Enter password :");
                    if (!pass)
                        return 0;
                    mount = Mount::mount(*name, Credentials{*user, *pass});
                }
                out_ << "Disk is mounted!!!\n";
                if (!file_menu_loop(*mount))
                    return 0;
                break;
            }
            case 9:
                return 0;
            }
        } catch (const VfsError& e) {
            out_ << "Error : " << e.what() << '\n';
        } catch (const std::exception& e) {
            out_ << "Error : " << e.what() << '\n';
        }
    }
}

int run_cli(int argc, char** argv) {
    std::string script;
    std::int32_t block_size = kDefaultBlockSize;
    std::int32_t disk_blocks = kDefaultDiskBlocks;
    std::int32_t no_of_inodes = kDefaultInodes;

    for (int i = 1; i < argc; ++i) {
        std::string arg = argv[i];
        auto next = [&]() -> std::string {
            if (i + 1 >= argc) {
                std::cerr << "missing value for " << arg << '\n';
                std::exit(1);
            }
            return argv[++i];
        };
        if (arg == "--script") {
            script = next();
        } else if (arg == "--block-size") {
            block_size = std::stoi(next());
        } else if (arg == "--disk-blocks") {
            disk_blocks = std::stoi(next());
        } else if (arg == "--inodes") {
            no_of_inodes = std::stoi(next());
        } else if (arg == "--help" || arg == "-h") {
            std::cout << "usage: vfs [--script <path>] [--block-size N] "
                         "[--disk-blocks N] [--inodes N]\n";
            return 0;
        } else {
            std::cerr << "unknown argument: " << arg << '\n';
            return 1;
        }
    }

    try {
        if (!script.empty()) {
            std::ifstream file(script);
            if (!file) {
                std::cerr << "cannot open script '" << script << "'\n";
                return 1;
            }
            Shell shell(file, std::cout, true, block_size, disk_blocks,
                        no_of_inodes);
            return shell.run();
        }
        Shell shell(std::cin, std::cout, false, block_size, disk_blocks,
                    no_of_inodes);
        return shell.run();
    } catch (const VfsError& e) {
        std::cerr << "Error : " << e.what() << '\n';
        return 1;
    }
}

} // namespace vfs
