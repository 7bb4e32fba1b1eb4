#include "vfs/inode.hpp"

#include <algorithm>

#include "vfs/bytes.hpp"

namespace vfs {

namespace {

std::int32_t read_entry(const BlockDevice& dev, std::int32_t block,
                        std::int32_t slot) {
    auto bytes = dev.read_block(block);
    return get_i32le(bytes.data() + 4 * static_cast<std::size_t>(slot));
}

void write_entry(BlockDevice& dev, std::int32_t block, std::int32_t slot,
                 std::int32_t value) {
    auto bytes = dev.read_block(block);
    put_i32le(bytes.data() + 4 * static_cast<std::size_t>(slot), value);
    dev.write_block(block, bytes);
}

void check_pointer(const Geometry& geo, std::int32_t p) {
    if (p < geo.data_start || p >= geo.disk_blocks)
        fail(Errc::corrupt_image,
             "block pointer " + std::to_string(p) + " out of range");
}

// Allocates a pointer block and fills it with -1 entries.
std::int32_t allocate_pointer_block(BlockDevice& dev, const Geometry& geo,
                                    Freelist& freelist) {
    std::int32_t block = allocate_lowest(freelist);
    std::vector<std::uint8_t> bytes(static_cast<std::size_t>(geo.block_size),
                                    0xFF);
    dev.write_block(block, bytes);
    return block;
}

} // namespace

std::int64_t max_logical_blocks(const Geometry& geo) {
    std::int64_t p = geo.pointers_per_block();
    return kDirectPointers + p + p * p;
}

std::int32_t allocate_lowest(Freelist& freelist) {
    auto it = std::find(freelist.begin(), freelist.end(), 0);
    if (it == freelist.end())
        fail(Errc::exhausted, "no free slot remains");
    *it = 1;
    return static_cast<std::int32_t>(it - freelist.begin());
}

std::int32_t resolve_block(BlockDevice& dev, const Geometry& geo, Inode& inode,
                           std::int64_t logical_index, bool allocate,
                           Freelist& datablock_freelist) {
    const std::int64_t p = geo.pointers_per_block();
    if (logical_index < 0 || logical_index >= max_logical_blocks(geo))
        fail(Errc::file_too_large,
             "logical block " + std::to_string(logical_index) +
                 " exceeds the pointer hierarchy");

    auto resolve_slot = [&](std::int32_t block, std::int32_t slot,
                            bool pointer_block) -> std::int32_t {
        std::int32_t entry = read_entry(dev, block, slot);
        if (entry == kNullPointer) {
            if (!allocate)
                fail(Errc::not_allocated, "hole in block chain");
            entry = pointer_block
                        ? allocate_pointer_block(dev, geo, datablock_freelist)
                        : allocate_lowest(datablock_freelist);
            write_entry(dev, block, slot, entry);
        } else {
            check_pointer(geo, entry);
        }
        return entry;
    };

    if (logical_index < kDirectPointers) {
        std::int32_t& slot = inode.ptr[static_cast<std::size_t>(logical_index)];
        if (slot == kNullPointer) {
            if (!allocate)
                fail(Errc::not_allocated, "hole in block chain");
            slot = allocate_lowest(datablock_freelist);
        } else {
            check_pointer(geo, slot);
        }
        return slot;
    }

    if (logical_index < kDirectPointers + p) {
        std::int32_t& root = inode.ptr[kSingleIndirectSlot];
        if (root == kNullPointer) {
            if (!allocate)
                fail(Errc::not_allocated, "hole in block chain");
            root = allocate_pointer_block(dev, geo, datablock_freelist);
        } else {
            check_pointer(geo, root);
        }
        return resolve_slot(
            root, static_cast<std::int32_t>(logical_index - kDirectPointers),
            false);
    }

    const std::int64_t k = logical_index - kDirectPointers - p;
    std::int32_t& root = inode.ptr[kDoubleIndirectSlot];
    if (root == kNullPointer) {
        if (!allocate)
            fail(Errc::not_allocated, "hole in block chain");
        root = allocate_pointer_block(dev, geo, datablock_freelist);
    } else {
        check_pointer(geo, root);
    }
    std::int32_t level2 =
        resolve_slot(root, static_cast<std::int32_t>(k / p), true);
    return resolve_slot(level2, static_cast<std::int32_t>(k % p), false);
}

std::int64_t pointer_blocks_for(std::int64_t data_blocks, const Geometry& geo) {
    const std::int64_t p = geo.pointers_per_block();
    std::int64_t count = 0;
    if (data_blocks > kDirectPointers)
        count += 1; // single-indirect root
    if (data_blocks > kDirectPointers + p) {
        std::int64_t in_double = data_blocks - kDirectPointers - p;
        count += 1 + (in_double + p - 1) / p; // double root + level-2 blocks
    }
    return count;
}

std::int64_t blocks_required(std::int64_t old_size, std::int64_t new_size,
                             const Geometry& geo) {
    const std::int64_t max_bytes =
        max_logical_blocks(geo) * static_cast<std::int64_t>(geo.block_size);
    if (new_size > max_bytes || new_size > INT32_MAX)
        fail(Errc::file_too_large, "file would exceed the maximum size");
    std::int64_t old_n = blocks_for_size(old_size, geo.block_size);
    std::int64_t new_n = blocks_for_size(new_size, geo.block_size);
    std::int64_t data = std::max<std::int64_t>(0, new_n - old_n);
    std::int64_t ptrs = std::max<std::int64_t>(
        0, pointer_blocks_for(new_n, geo) - pointer_blocks_for(old_n, geo));
    return data + ptrs;
}

std::vector<std::int32_t> chain_blocks(const BlockDevice& dev,
                                       const Geometry& geo,
                                       const Inode& inode) {
    const std::int64_t p = geo.pointers_per_block();
    std::vector<std::int32_t> blocks;

    for (int i = 0; i < kDirectPointers; ++i)
        if (inode.ptr[static_cast<std::size_t>(i)] != kNullPointer) {
            check_pointer(geo, inode.ptr[static_cast<std::size_t>(i)]);
            blocks.push_back(inode.ptr[static_cast<std::size_t>(i)]);
        }

    auto walk_pointer_block = [&](std::int32_t block, auto&& on_entry) {
        auto bytes = dev.read_block(block);
        for (std::int64_t s = 0; s < p; ++s) {
            std::int32_t entry =
                get_i32le(bytes.data() + 4 * static_cast<std::size_t>(s));
            if (entry == kNullPointer)
                continue;
            check_pointer(geo, entry);
            on_entry(entry);
        }
    };

    if (inode.ptr[kSingleIndirectSlot] != kNullPointer) {
        check_pointer(geo, inode.ptr[kSingleIndirectSlot]);
        blocks.push_back(inode.ptr[kSingleIndirectSlot]);
        walk_pointer_block(inode.ptr[kSingleIndirectSlot],
                           [&](std::int32_t b) { blocks.push_back(b); });
    }
    if (inode.ptr[kDoubleIndirectSlot] != kNullPointer) {
        check_pointer(geo, inode.ptr[kDoubleIndirectSlot]);
        blocks.push_back(inode.ptr[kDoubleIndirectSlot]);
        walk_pointer_block(inode.ptr[kDoubleIndirectSlot],
                           [&](std::int32_t level2) {
                               blocks.push_back(level2);
                               walk_pointer_block(level2, [&](std::int32_t b) {
                                   blocks.push_back(b);
                               });
                           });
    }
    return blocks;
}

std::int32_t free_chain(BlockDevice& dev, const Geometry& geo, Inode& inode,
                        Freelist& datablock_freelist) {
    auto blocks = chain_blocks(dev, geo, inode);
    for (std::int32_t b : blocks)
        datablock_freelist[static_cast<std::size_t>(b)] = 0;
    inode = Inode{};
    return static_cast<std::int32_t>(blocks.size());
}

void truncate_chain(BlockDevice& dev, const Geometry& geo, Inode& inode,
                    std::int64_t new_block_count, Freelist& datablock_freelist) {
    const std::int64_t p = geo.pointers_per_block();
    auto free_block = [&](std::int32_t b) {
        datablock_freelist[static_cast<std::size_t>(b)] = 0;
    };

    // Direct pointers beyond the new count.
    for (std::int64_t i = std::max<std::int64_t>(new_block_count, 0);
         i < kDirectPointers; ++i) {
        std::int32_t& slot = inode.ptr[static_cast<std::size_t>(i)];
        if (slot != kNullPointer) {
            free_block(slot);
            slot = kNullPointer;
        }
    }

    // Single-indirect range. keep = entries still needed in that block.
    if (inode.ptr[kSingleIndirectSlot] != kNullPointer) {
        std::int64_t keep = std::clamp<std::int64_t>(
            new_block_count - kDirectPointers, 0, p);
        if (keep == 0) {
            auto bytes = dev.read_block(inode.ptr[kSingleIndirectSlot]);
            for (std::int64_t s = 0; s < p; ++s) {
                std::int32_t entry =
                    get_i32le(bytes.data() + 4 * static_cast<std::size_t>(s));
                if (entry != kNullPointer)
                    free_block(entry);
            }
            free_block(inode.ptr[kSingleIndirectSlot]);
            inode.ptr[kSingleIndirectSlot] = kNullPointer;
        } else if (keep < p) {
            auto bytes = dev.read_block(inode.ptr[kSingleIndirectSlot]);
            bool dirty = false;
            for (std::int64_t s = keep; s < p; ++s) {
                auto* at = bytes.data() + 4 * static_cast<std::size_t>(s);
                std::int32_t entry = get_i32le(at);
                if (entry != kNullPointer) {
                    free_block(entry);
                    put_i32le(at, kNullPointer);
                    dirty = true;
                }
            }
            if (dirty)
                dev.write_block(inode.ptr[kSingleIndirectSlot], bytes);
        }
    }

    // Double-indirect range.
    if (inode.ptr[kDoubleIndirectSlot] != kNullPointer) {
        std::int64_t keep = std::clamp<std::int64_t>(
            new_block_count - kDirectPointers - p, 0, p * p);
        auto root_bytes = dev.read_block(inode.ptr[kDoubleIndirectSlot]);
        bool root_dirty = false;
        for (std::int64_t l2 = 0; l2 < p; ++l2) {
            auto* root_at =
                root_bytes.data() + 4 * static_cast<std::size_t>(l2);
            std::int32_t level2 = get_i32le(root_at);
            if (level2 == kNullPointer)
                continue;
            std::int64_t keep_here =
                std::clamp<std::int64_t>(keep - l2 * p, 0, p);
            if (keep_here == p)
                continue;
            auto bytes = dev.read_block(level2);
            bool dirty = false;
            for (std::int64_t s = keep_here; s < p; ++s) {
                auto* at = bytes.data() + 4 * static_cast<std::size_t>(s);
                std::int32_t entry = get_i32le(at);
                if (entry != kNullPointer) {
                    free_block(entry);
                    put_i32le(at, kNullPointer);
                    dirty = true;
                }
            }
            if (keep_here == 0) {
                free_block(level2);
                put_i32le(root_at, kNullPointer);
                root_dirty = true;
            } else if (dirty) {
                dev.write_block(level2, bytes);
            }
        }
        if (keep == 0) {
            free_block(inode.ptr[kDoubleIndirectSlot]);
            inode.ptr[kDoubleIndirectSlot] = kNullPointer;
        } else if (root_dirty) {
            dev.write_block(inode.ptr[kDoubleIndirectSlot], root_bytes);
        }
    }
}

} // namespace vfs
