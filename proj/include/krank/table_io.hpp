#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "krank/partition_table.hpp"

namespace krank {

// On-disk layout, all integers little-endian:
//   "PTAB" | u32 version | u64 max_n | for i in 0..max_n: u32 len | len magnitude bytes
inline constexpr std::uint32_t kTableFormatVersion = 1;
inline constexpr std::uint64_t kSpotCheckSeed = 0x5054414232303236ULL;
inline constexpr int kSpotCheckCount = 16;

void save_table(const PartitionTable& table, const std::filesystem::path& path);

/// Reads a cache file, validating magic, version and lengths
/// (CorruptFileError), then re-derives the pentagonal recurrence at the
/// seeded spot-check indices (RecurrenceMismatchError).
PartitionTable load_table(const std::filesystem::path& path);

/// Indices in [1, max_n] that load_table re-verifies; fixed for a given max_n.
std::vector<std::int64_t> spot_check_indices(std::int64_t max_n);

/// Loads `path` if it exists and covers max_n, otherwise builds the table
/// and, when `path` is non-empty, writes it back.
PartitionTable load_or_build_table(std::int64_t max_n, const std::filesystem::path& path);

}  // namespace krank
