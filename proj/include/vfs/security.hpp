#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>

#include "vfs/layout.hpp"

namespace vfs {

class Mount;

struct Credentials {
    std::string username; // up to 30 characters, validate_filename rules
    std::string password; // length in [1, 64]
};

// Input validation, login authentication and per-file encryption.
//
// The hashing and cipher primitives here (FNV-1a, xorshift64* XOR
// stream) are pedagogical: fully specified, dependency-free and
// bit-exactly testable. They are NOT cryptographically secure and must
// not be used to protect real secrets.

// Accepts 1-30 characters from [A-Za-z0-9._-]; rejects "." and "..".
// Returns the name unchanged. invalid_name otherwise.
std::string validate_filename(std::string_view text);

// Trims surrounding whitespace and accepts only a pure decimal integer
// belonging to the allowed set. invalid_choice for anything else,
// trailing garbage included.
int parse_menu_choice(std::string_view text, const std::set<int>& allowed);

// Standard 64-bit FNV-1a.
std::uint64_t fnv1a64(std::span<const std::uint8_t> bytes);
std::uint64_t fnv1a64(std::string_view text);

// Salted, iterated FNV-1a key derivation:
//   h = fnv1a64(le64(salt) ++ password)
//   repeat iterations times: h = fnv1a64(le64(h))
std::uint64_t derive_key(std::string_view password, std::uint64_t salt,
                         std::uint32_t iterations = kKdfIterations);

bool verify(const AuthRecord& auth, const Credentials& credentials);

// Enables (or replaces) the login record. A fresh 8-byte salt comes
// from the system randomness source. When auth is already enabled the
// old credentials are required.
void set_password(Mount& mount, const Credentials& credentials,
                  const std::optional<Credentials>& old_credentials = {});

// XORs the file content in place with the keystream derived from the
// passphrase. Applying it twice with the same passphrase restores the
// original bytes. Size, name and inode stay untouched.
void crypt_file(Mount& mount, const std::string& name,
                std::string_view passphrase);

// The keystream generator: xorshift64* seeded with fnv1a64(passphrase)
// (0x9E3779B97F4A7C15 when that hash is zero), each output emitted as 8
// little-endian bytes.
class KeyStream {
public:
    explicit KeyStream(std::string_view passphrase);

    std::uint8_t next_byte();

private:
    std::uint64_t state_;
    std::uint8_t buf_[8];
    int pos_ = 8;
};

} // namespace vfs
