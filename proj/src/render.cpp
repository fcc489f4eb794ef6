#include "qpart/render.hpp"

#include <algorithm>
#include <sstream>

#include "qpart/errors.hpp"
#include "qpart/field_io.hpp"

namespace qpart {

namespace {

// P6 image: axis 0 along x, axis 1 pointing up (last grid row = top pixel row)
std::string ppm_bytes(int n1, int n2, const std::function<Rgb(int, int)>& pixel) {
    std::ostringstream out;
    out << "P6\n" << n1 << " " << n2 << "\n255\n";
    std::string bytes = out.str();
    bytes.reserve(bytes.size() + static_cast<std::size_t>(n1) * n2 * 3);
    for (int row = 0; row < n2; ++row) {
        const int k = n2 - 1 - row;
        for (int i = 0; i < n1; ++i) {
            const Rgb c = pixel(i, k);
            bytes.push_back(static_cast<char>(c.r));
            bytes.push_back(static_cast<char>(c.g));
            bytes.push_back(static_cast<char>(c.b));
        }
    }
    return bytes;
}

std::filesystem::path legend_path(const std::filesystem::path& out) {
    return std::filesystem::path(out.string() + ".legend.txt");
}

} // namespace

void render_field_ppm(const TimeAverageField& field, const std::filesystem::path& out) {
    const Colormap& map = Colormap::viridis256();
    const auto range = field.value_range();
    const double lo = range ? range->first : 0.0;
    const double hi = range ? range->second : 0.0;
    const double span = hi - lo;

    const std::string bytes = ppm_bytes(field.n1(), field.n2(), [&](int i, int k) -> Rgb {
        if (field.state(i, k) == CellState::escaped) {
            return kEscapedColor;
        }
        const double t = span > 0.0 ? (field.value(i, k) - lo) / span : 0.0;
        return map.at_fraction(t);
    });
    atomic_write(out, bytes);

    std::ostringstream legend;
    legend << "observable: " << field.observable_id() << "\n"
           << "dims: " << field.n1() << " x " << field.n2() << "\n"
           << "value_min: " << std::hexfloat << lo << std::defaultfloat << " (" << lo << ")\n"
           << "value_max: " << std::hexfloat << hi << std::defaultfloat << " (" << hi << ")\n"
           << "colormap: " << map.name() << "\n"
           << "colormap_checksum: " << checksum_hex(map.checksum()) << "\n"
           << "escaped_color: " << int(kEscapedColor.r) << " " << int(kEscapedColor.g) << " "
           << int(kEscapedColor.b) << "\n";
    write_text_file(legend_path(out), legend.str());
}

void render_partition_ppm(const PartitionField& partition, const std::filesystem::path& out) {
    const Colormap& map = Colormap::viridis256();
    const int n_labels = static_cast<int>(partition.label_bins.size());
    const std::string bytes = ppm_bytes(partition.n1(), partition.n2(), [&](int i, int k) -> Rgb {
        const std::int32_t label = partition.labels[partition.index(i, k)];
        if (label == PartitionField::kEscapedLabel) {
            return kEscapedColor;
        }
        const double t = n_labels > 1 ? static_cast<double>(label) / (n_labels - 1) : 0.0;
        return map.at_fraction(t);
    });
    atomic_write(out, bytes);

    std::ostringstream legend;
    legend << "labels: " << n_labels << "\n"
           << "dims: " << partition.n1() << " x " << partition.n2() << "\n"
           << "colormap: " << map.name() << "\n"
           << "colormap_checksum: " << checksum_hex(map.checksum()) << "\n"
           << "escaped_color: " << int(kEscapedColor.r) << " " << int(kEscapedColor.g) << " "
           << int(kEscapedColor.b) << "\n";
    write_text_file(legend_path(out), legend.str());
}

void render_file(const std::filesystem::path& in, const std::filesystem::path& out) {
    switch (probe_container(in)) {
    case ContainerKind::field:
        render_field_ppm(load_field(in), out);
        return;
    case ContainerKind::partition:
        render_partition_ppm(load_partition(in), out);
        return;
    }
    throw IoError("'" + in.string() + "': not renderable");
}

} // namespace qpart
