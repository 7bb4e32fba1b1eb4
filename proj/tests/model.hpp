#pragma once

// In-memory reference model of the filesystem (name -> byte string plus
// an open-fd map) and a random-operation harness that drives the real
// implementation and the model side by side, comparing every result and
// error class.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "testutil.hpp"
#include "vfs/fscore.hpp"
#include "vfs/security.hpp"

namespace vfstest {

struct ModelError {
    vfs::Errc code;
};

// Either a success payload or an error class.
template <class T> using Outcome = std::variant<T, ModelError>;

class ReferenceModel {
public:
    ReferenceModel(std::int32_t block_size, std::int32_t available_blocks,
                   std::int32_t no_of_inodes)
        : bs_(block_size), capacity_(available_blocks),
          inode_count_(no_of_inodes) {
        p_ = block_size / 4;
    }

    Outcome<std::monostate> create(const std::string& name) {
        if (!name_valid(name))
            return ModelError{vfs::Errc::invalid_name};
        if (files_.contains(name))
            return ModelError{vfs::Errc::duplicate_name};
        if (static_cast<std::int32_t>(files_.size()) >= inode_count_)
            return ModelError{vfs::Errc::no_free_inode};
        if (free_blocks() < 1)
            return ModelError{vfs::Errc::disk_full};
        files_[name] = "";
        return std::monostate{};
    }

    Outcome<std::monostate> remove(const std::string& name) {
        if (!files_.contains(name))
            return ModelError{vfs::Errc::not_found};
        if (fd_of(name))
            return ModelError{vfs::Errc::file_open};
        files_.erase(name);
        return std::monostate{};
    }

    Outcome<int> open(const std::string& name, vfs::OpenMode mode) {
        if (!files_.contains(name))
            return ModelError{vfs::Errc::not_found};
        if (fd_of(name))
            return ModelError{vfs::Errc::already_open};
        if (static_cast<int>(fds_.size()) >= vfs::kMaxOpenFiles)
            return ModelError{vfs::Errc::fd_table_full};
        int fd = 0;
        while (fds_.contains(fd))
            ++fd;
        fds_[fd] = {name, mode};
        return fd;
    }

    Outcome<std::monostate> close(int fd) {
        if (fds_.erase(fd) == 0)
            return ModelError{vfs::Errc::bad_fd};
        return std::monostate{};
    }

    Outcome<std::string> read(int fd) {
        auto* e = slot(fd);
        if (!e)
            return ModelError{vfs::Errc::bad_fd};
        if (e->second != vfs::OpenMode::read)
            return ModelError{vfs::Errc::wrong_mode};
        return files_.at(e->first);
    }

    Outcome<std::int64_t> write(int fd, const std::string& data) {
        auto* e = slot(fd);
        if (!e)
            return ModelError{vfs::Errc::bad_fd};
        if (e->second != vfs::OpenMode::write)
            return ModelError{vfs::Errc::wrong_mode};
        std::string& content = files_.at(e->first);
        auto err = capacity_check(content.size(), data.size());
        if (err)
            return *err;
        content = data;
        return static_cast<std::int64_t>(data.size());
    }

    Outcome<std::int64_t> append(int fd, const std::string& data) {
        auto* e = slot(fd);
        if (!e)
            return ModelError{vfs::Errc::bad_fd};
        if (e->second != vfs::OpenMode::append)
            return ModelError{vfs::Errc::wrong_mode};
        std::string& content = files_.at(e->first);
        auto err = capacity_check(content.size(),
                                  content.size() + data.size());
        if (err)
            return *err;
        content += data;
        return static_cast<std::int64_t>(data.size());
    }

    std::vector<std::string> list() const {
        std::vector<std::string> names;
        for (const auto& [name, _] : files_)
            names.push_back(name); // std::map iterates sorted
        return names;
    }

    std::vector<std::pair<int, std::string>> list_open() const {
        std::vector<std::pair<int, std::string>> out;
        for (const auto& [fd, e] : fds_)
            out.emplace_back(fd, e.first);
        return out;
    }

    const std::map<std::string, std::string>& files() const { return files_; }
    void drop_all_fds() { fds_.clear(); }

    std::int64_t free_blocks() const {
        std::int64_t used = 0;
        for (const auto& [_, content] : files_)
            used += census_blocks_for_size(
                static_cast<std::int64_t>(content.size()), bs_, p_);
        return capacity_ - used;
    }

private:
    bool name_valid(const std::string& name) const {
        if (name.empty() || name.size() > 30 || name == "." || name == "..")
            return false;
        for (char c : name) {
            bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                      (c >= '0' && c <= '9') || c == '.' || c == '_' ||
                      c == '-';
            if (!ok)
                return false;
        }
        return true;
    }

    std::optional<int> fd_of(const std::string& name) const {
        for (const auto& [fd, e] : fds_)
            if (e.first == name)
                return fd;
        return std::nullopt;
    }

    std::pair<std::string, vfs::OpenMode>* slot(int fd) {
        auto it = fds_.find(fd);
        return it == fds_.end() ? nullptr : &it->second;
    }

    std::optional<ModelError> capacity_check(std::size_t old_size,
                                             std::size_t new_size) const {
        std::int64_t max_bytes = (10 + p_ + p_ * p_) * bs_;
        if (static_cast<std::int64_t>(new_size) > max_bytes ||
            new_size > static_cast<std::size_t>(INT32_MAX))
            return ModelError{vfs::Errc::file_too_large};
        std::int64_t need =
            census_blocks_for_size(static_cast<std::int64_t>(new_size), bs_,
                                   p_) -
            census_blocks_for_size(static_cast<std::int64_t>(old_size), bs_,
                                   p_);
        if (need > 0 && need > free_blocks())
            return ModelError{vfs::Errc::disk_full};
        return std::nullopt;
    }

    std::int64_t bs_;
    std::int64_t p_;
    std::int64_t capacity_;
    std::int32_t inode_count_;
    std::map<std::string, std::string> files_;
    std::map<int, std::pair<std::string, vfs::OpenMode>> fds_;
};

// Drives `ops` random operations against both sides. Returns the number
// of divergences (0 expected); stops early after the first divergence.
// Audits the real filesystem after every step when `audit_each` is set.
struct HarnessReport {
    std::int64_t divergences = 0;
    std::string first_divergence;
    std::int64_t steps = 0;
};

inline vfs::Errc run_and_code(const std::function<void()>& f, bool& threw) {
    try {
        f();
        threw = false;
        return vfs::Errc::io_failure; // unused
    } catch (const vfs::VfsError& e) {
        threw = true;
        return e.code();
    }
}

inline HarnessReport run_random_ops(vfs::Mount& mount, ReferenceModel& model,
                                    std::int64_t ops, std::uint32_t seed,
                                    bool audit_each) {
    std::mt19937 rng(seed);
    HarnessReport rep;

    const std::vector<std::string> names = {"a.txt",  "bb.c",   "main.cpp",
                                            "data",   "x_1-2",  "zzz",
                                            "f6",     "g7",     "h8",
                                            "bad/name", "", ".."};
    auto pick_name = [&]() { return names[rng() % names.size()]; };
    auto pick_fd = [&]() -> int {
        if (rng() % 8 == 0)
            return static_cast<int>(rng() % 40); // sometimes bogus
        return static_cast<int>(rng() % 5);
    };
    auto pick_mode = [&]() {
        return static_cast<vfs::OpenMode>(1 + rng() % 3);
    };
    auto pick_data = [&]() {
        const std::int64_t bs = mount.geometry().block_size;
        std::int64_t len;
        switch (rng() % 6) {
        case 0: len = 0; break;
        case 1: len = static_cast<std::int64_t>(rng() % 10); break;
        case 2: len = bs + static_cast<std::int64_t>(rng() % bs); break;
        case 3: len = 11 * bs + static_cast<std::int64_t>(rng() % (4 * bs));
            break; // around the single-indirect boundary
        case 4: len = 26 * bs + static_cast<std::int64_t>(rng() % (8 * bs));
            break; // around the double-indirect boundary
        default: len = static_cast<std::int64_t>(rng() % (3 * bs));
        }
        std::string data(static_cast<std::size_t>(len), '\0');
        for (auto& c : data)
            c = static_cast<char>(rng() % 256);
        return data;
    };

    auto diverge = [&](const std::string& what) {
        rep.divergences += 1;
        if (rep.first_divergence.empty())
            rep.first_divergence =
                "step " + std::to_string(rep.steps) + ": " + what;
    };

    // Compares a real call against a model outcome.
    auto compare = [&]<class T>(const std::string& what,
                                const std::function<T()>& real,
                                const Outcome<T>& expected) {
        bool threw = false;
        T value{};
        vfs::Errc code{};
        try {
            value = real();
        } catch (const vfs::VfsError& e) {
            threw = true;
            code = e.code();
        }
        if (std::holds_alternative<ModelError>(expected)) {
            auto want = std::get<ModelError>(expected).code;
            if (!threw)
                diverge(what + ": expected " +
                        vfs::errc_name(want) + ", got success");
            else if (code != want)
                diverge(what + ": expected " + vfs::errc_name(want) +
                        ", got " + vfs::errc_name(code));
        } else {
            if (threw)
                diverge(what + ": expected success, got " +
                        vfs::errc_name(code));
            else if (!(value == std::get<T>(expected)))
                diverge(what + ": value mismatch");
        }
    };

    for (rep.steps = 0; rep.steps < ops && rep.divergences == 0;
         ++rep.steps) {
        switch (rng() % 9) {
        case 0: {
            auto name = pick_name();
            compare.template operator()<std::monostate>(
                "create " + name,
                [&] {
                    mount.create_file(name);
                    return std::monostate{};
                },
                model.create(name));
            break;
        }
        case 1: {
            auto name = pick_name();
            compare.template operator()<std::monostate>(
                "delete " + name,
                [&] {
                    mount.delete_file(name);
                    return std::monostate{};
                },
                model.remove(name));
            break;
        }
        case 2: {
            auto name = pick_name();
            auto mode = pick_mode();
            compare.template operator()<int>(
                "open " + name,
                [&] { return mount.open_file(name, mode); },
                model.open(name, mode));
            break;
        }
        case 3: {
            int fd = pick_fd();
            compare.template operator()<std::monostate>(
                "close " + std::to_string(fd),
                [&] {
                    mount.close_file(fd);
                    return std::monostate{};
                },
                model.close(fd));
            break;
        }
        case 4: {
            int fd = pick_fd();
            compare.template operator()<std::string>(
                "read " + std::to_string(fd),
                [&] {
                    auto bytes = mount.read_file(fd);
                    return std::string(bytes.begin(), bytes.end());
                },
                model.read(fd));
            break;
        }
        case 5: {
            int fd = pick_fd();
            auto data = pick_data();
            compare.template operator()<std::int64_t>(
                "write " + std::to_string(fd),
                [&] {
                    return mount.write_file(
                        fd, std::span<const std::uint8_t>(
                                reinterpret_cast<const std::uint8_t*>(
                                    data.data()),
                                data.size()));
                },
                model.write(fd, data));
            break;
        }
        case 6: {
            int fd = pick_fd();
            auto data = pick_data();
            compare.template operator()<std::int64_t>(
                "append " + std::to_string(fd),
                [&] {
                    return mount.append_file(
                        fd, std::span<const std::uint8_t>(
                                reinterpret_cast<const std::uint8_t*>(
                                    data.data()),
                                data.size()));
                },
                model.append(fd, data));
            break;
        }
        case 7: {
            auto real = mount.list_files();
            auto want = model.list();
            if (real.size() != want.size()) {
                diverge("list: size mismatch");
            } else {
                for (std::size_t i = 0; i < real.size(); ++i)
                    if (real[i].first != want[i]) {
                        diverge("list: name mismatch");
                        break;
                    }
            }
            break;
        }
        default: {
            auto real = mount.list_open_files();
            auto want = model.list_open();
            if (real.size() != want.size()) {
                diverge("list_open: size mismatch");
            } else {
                for (std::size_t i = 0; i < real.size(); ++i)
                    if (real[i].fd != want[i].first ||
                        real[i].name != want[i].second) {
                        diverge("list_open: entry mismatch");
                        break;
                    }
            }
            break;
        }
        }

        if (audit_each && rep.divergences == 0) {
            auto audit = audit_mount(mount);
            if (!audit.ok)
                diverge("audit: " + audit.detail);
        }
    }
    return rep;
}

// Checks that the mounted filesystem matches the model state exactly:
// every name present with identical content, nothing extra.
inline bool matches_model(vfs::Mount& mount, const ReferenceModel& model,
                          std::string* detail = nullptr) {
    auto listing = mount.list_files();
    if (listing.size() != model.files().size()) {
        if (detail)
            *detail = "file count mismatch";
        return false;
    }
    for (const auto& [name, inode] : listing) {
        auto it = model.files().find(name);
        if (it == model.files().end()) {
            if (detail)
                *detail = "unexpected file " + name;
            return false;
        }
        int fd = mount.open_file(name, vfs::OpenMode::read);
        auto bytes = mount.read_file(fd);
        mount.close_file(fd);
        if (std::string(bytes.begin(), bytes.end()) != it->second) {
            if (detail)
                *detail = "content mismatch for " + name;
            return false;
        }
    }
    return true;
}

} // namespace vfstest
