#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>

#include "qpart/partition.hpp"

namespace qpart {

/// FNV-1a 64-bit over raw bytes.
std::uint64_t fnv1a64(std::span<const std::byte> bytes);
std::uint64_t fnv1a64(std::span<const char> bytes);
std::string checksum_hex(std::uint64_t value);

/// Field container: 8-byte magic, u32 little-endian header length, canonical
/// JSON header (format version, configuration echo, observable id, dims, axis
/// ranges, cell-state legend, body checksum), then row-major cell records of
/// one state byte plus an 8-byte little-endian value. Escaped cells store 0.0.
/// Loading then saving reproduces the bytes exactly.
inline constexpr char kFieldMagic[8] = {'Q', 'P', 'F', 'I', 'E', 'L', 'D', '1'};
inline constexpr char kPartitionMagic[8] = {'Q', 'P', 'P', 'A', 'R', 'T', '1', '\0'};

void save_field(const TimeAverageField& field, const std::filesystem::path& path);
TimeAverageField load_field(const std::filesystem::path& path);

void save_partition(const PartitionField& partition, const std::filesystem::path& path);
PartitionField load_partition(const std::filesystem::path& path);

enum class ContainerKind { field, partition };
ContainerKind probe_container(const std::filesystem::path& path);

/// Writes bytes to path via a same-directory temp file and an atomic rename,
/// so a failed write never leaves a partial file at the target.
void atomic_write(const std::filesystem::path& path, std::span<const char> bytes);

void write_text_file(const std::filesystem::path& path, const std::string& text);

} // namespace qpart
