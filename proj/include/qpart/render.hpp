#pragma once

#include <array>
#include <cstdint>
#include <filesystem>

#include "qpart/partition.hpp"

namespace qpart {

struct Rgb {
    std::uint8_t r, g, b;
};

/// Fixed 256-entry perceptual colormap. The same table ships as
/// data/colormap_viridis256.txt; a test pins the file to this array.
class Colormap {
public:
    static const Colormap& viridis256();

    const std::array<Rgb, 256>& table() const { return table_; }
    const char* name() const { return name_; }
    std::uint64_t checksum() const; ///< FNV-1a 64 over the raw r,g,b bytes
    Rgb at_fraction(double t) const; ///< t clamped to [0, 1]

private:
    Colormap(const char* name, std::array<Rgb, 256> table);
    const char* name_;
    std::array<Rgb, 256> table_;
};

/// Reserved color for escaped cells; deliberately outside the colormap range.
inline constexpr Rgb kEscapedColor{0, 60, 0};

/// Writes a binary P6 pixmap, one pixel per cell, axis-0 along x and axis-1
/// upward, plus a sidecar text legend "<out>.legend.txt" recording the value
/// range and colormap.
void render_field_ppm(const TimeAverageField& field, const std::filesystem::path& out);

/// Partition labels cycle through the colormap; escaped cells use the
/// reserved color.
void render_partition_ppm(const PartitionField& partition, const std::filesystem::path& out);

/// Dispatches on the container magic.
void render_file(const std::filesystem::path& in, const std::filesystem::path& out);

} // namespace qpart
