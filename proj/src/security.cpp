#include "vfs/security.hpp"

#include <cctype>
#include <random>

#include "vfs/bytes.hpp"
#include "vfs/fscore.hpp"

namespace vfs {

namespace {

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;
constexpr std::uint64_t kZeroSeedReplacement = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kXorshiftMultiplier = 0x2545F4914F6CDD1DULL;

bool valid_name_char(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
           (c >= '0' && c <= '9') || c == '.' || c == '_' || c == '-';
}

std::uint64_t fnv1a64_step(std::uint64_t h, std::uint8_t byte) {
    return (h ^ byte) * kFnvPrime;
}

} // namespace

std::string validate_filename(std::string_view text) {
    if (text.empty())
        fail(Errc::invalid_name, "filename is empty");
    if (text.size() > kMaxNameChars)
        fail(Errc::invalid_name, "filename longer than 30 characters");
    if (text == "." || text == "..")
        fail(Errc::invalid_name, "filename is reserved");
    for (char c : text)
        if (!valid_name_char(c))
            fail(Errc::invalid_name,
                 "filename may only contain letters, digits, '.', '_', '-'");
    return std::string(text);
}

int parse_menu_choice(std::string_view text, const std::set<int>& allowed) {
    std::size_t begin = 0, end = text.size();
    while (begin < end && std::isspace(static_cast<unsigned char>(text[begin])))
        ++begin;
    while (end > begin && std::isspace(static_cast<unsigned char>(text[end - 1])))
        --end;
    std::string_view digits = text.substr(begin, end - begin);
    if (digits.empty())
        fail(Errc::invalid_choice, "empty input");
    long long value = 0;
    for (char c : digits) {
        if (c < '0' || c > '9')
            fail(Errc::invalid_choice, "input is not a number");
        value = value * 10 + (c - '0');
        if (value > 1000000)
            fail(Errc::invalid_choice, "number out of range");
    }
    int choice = static_cast<int>(value);
    if (!allowed.contains(choice))
        fail(Errc::invalid_choice,
             "choice " + std::to_string(choice) + " is not on the menu");
    return choice;
}

std::uint64_t fnv1a64(std::span<const std::uint8_t> bytes) {
    std::uint64_t h = kFnvOffset;
    for (std::uint8_t b : bytes)
        h = fnv1a64_step(h, b);
    return h;
}

std::uint64_t fnv1a64(std::string_view text) {
    return fnv1a64(std::span<const std::uint8_t>(
        reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

std::uint64_t derive_key(std::string_view password, std::uint64_t salt,
                         std::uint32_t iterations) {
    std::uint8_t le[8];
    put_u64le(le, salt);
    std::uint64_t h = kFnvOffset;
    for (std::uint8_t b : le)
        h = fnv1a64_step(h, b);
    for (char c : password)
        h = fnv1a64_step(h, static_cast<std::uint8_t>(c));
    for (std::uint32_t i = 0; i < iterations; ++i) {
        put_u64le(le, h);
        h = fnv1a64(std::span<const std::uint8_t>(le, 8));
    }
    return h;
}

bool verify(const AuthRecord& auth, const Credentials& credentials) {
    if (!auth.enabled)
        return false;
    std::array<char, kNameFieldBytes> user{};
    std::copy_n(credentials.username.begin(),
                std::min(credentials.username.size(), kNameFieldBytes - 1),
                user.begin());
    std::uint64_t hash =
        derive_key(credentials.password, auth.salt, auth.iterations);
    // Compare both fields unconditionally.
    bool user_ok = user == auth.username;
    bool hash_ok = hash == auth.password_hash;
    return user_ok && hash_ok;
}

void set_password(Mount& mount, const Credentials& credentials,
                  const std::optional<Credentials>& old_credentials) {
    if (!mount.is_mounted())
        fail(Errc::io_failure, "mount is no longer valid");
    validate_filename(credentials.username); // same charset/length rules
    if (credentials.password.empty() || credentials.password.size() > 64)
        fail(Errc::invalid_name, "password length must be in [1, 64]");

    AuthRecord& auth = mount.superblock().auth;
    if (auth.enabled) {
        if (!old_credentials || !verify(auth, *old_credentials))
            fail(Errc::auth_failed, "old credentials do not match");
    }

    std::random_device rd;
    std::uint64_t salt = (static_cast<std::uint64_t>(rd()) << 32) | rd();

    auth.enabled = 1;
    auth.username.fill('\0');
    std::copy_n(credentials.username.begin(),
                std::min(credentials.username.size(), kNameFieldBytes - 1),
                auth.username.begin());
    auth.salt = salt;
    auth.iterations = kKdfIterations;
    auth.password_hash =
        derive_key(credentials.password, salt, kKdfIterations);
}

KeyStream::KeyStream(std::string_view passphrase) {
    state_ = fnv1a64(passphrase);
    if (state_ == 0)
        state_ = kZeroSeedReplacement;
}

std::uint8_t KeyStream::next_byte() {
    if (pos_ == 8) {
        state_ ^= state_ >> 12;
        state_ ^= state_ << 25;
        state_ ^= state_ >> 27;
        put_u64le(buf_, state_ * kXorshiftMultiplier);
        pos_ = 0;
    }
    return buf_[pos_++];
}

void crypt_file(Mount& mount, const std::string& name,
                std::string_view passphrase) {
    std::int32_t inode_index = mount.inode_index_of(name);
    if (inode_index < 0)
        fail(Errc::not_found, "no file named '" + name + "'");
    if (mount.file_is_open(inode_index))
        fail(Errc::file_open, "file '" + name + "' is open");

    auto content = mount.read_content(inode_index);
    KeyStream stream(passphrase);
    for (auto& byte : content)
        byte ^= stream.next_byte();
    mount.overwrite_content_in_place(inode_index, content);
}

} // namespace vfs
