#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "qpart/field_io.hpp"
#include "qpart/render.hpp"

using namespace qpart;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
    const auto dir = fs::temp_directory_path() / "qpart_render_tests";
    fs::create_directories(dir);
    return dir;
}

TimeAverageField synthetic_field(int n1, int n2,
                                 const std::function<double(int, int)>& value,
                                 const std::function<bool(int, int)>& escaped = {}) {
    ScanDomain d;
    d.axes[0] = {0, 0.0, 1.0, n1, CoordinateTopology::line};
    d.axes[1] = {1, 0.0, 1.0, n2, CoordinateTopology::line};
    TimeAverageField f(d, "synthetic", IntegratorConfig{}, std::nullopt);
    for (int i = 0; i < n1; ++i) {
        for (int k = 0; k < n2; ++k) {
            if (escaped && escaped(i, k)) {
                f.states()[f.index(i, k)] = CellState::escaped;
            } else {
                f.values()[f.index(i, k)] = value(i, k);
            }
        }
    }
    return f;
}

std::string read_bytes(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

struct Image {
    int w = 0, h = 0;
    std::string pixels;
};

Image parse_p6(const std::string& bytes) {
    Image img;
    std::istringstream header(bytes.substr(0, 64));
    std::string magic;
    int maxval = 0;
    header >> magic >> img.w >> img.h >> maxval;
    REQUIRE(magic == "P6");
    REQUIRE(maxval == 255);
    const auto pixel_start = bytes.find("255\n") + 4;
    img.pixels = bytes.substr(pixel_start);
    REQUIRE(static_cast<long>(img.pixels.size()) == 3L * img.w * img.h);
    return img;
}

} // namespace

TEST_SUITE("render") {

TEST_CASE("constant field renders a uniform image") {
    const auto field = synthetic_field(6, 4, [](int, int) { return 1.5; });
    const auto out = temp_dir() / "constant.ppm";
    render_field_ppm(field, out);
    const auto img = parse_p6(read_bytes(out));
    CHECK(img.w == 6);
    CHECK(img.h == 4);
    for (std::size_t p = 3; p < img.pixels.size(); p += 3) {
        CHECK(img.pixels[p] == img.pixels[0]);
        CHECK(img.pixels[p + 1] == img.pixels[1]);
        CHECK(img.pixels[p + 2] == img.pixels[2]);
    }
    const auto legend = read_bytes(fs::path(out.string() + ".legend.txt"));
    CHECK(legend.find("colormap: viridis256") != std::string::npos);
    CHECK(legend.find("value_min:") != std::string::npos);
    CHECK(legend.find("observable: synthetic") != std::string::npos);
    fs::remove(out);
}

TEST_CASE("fully escaped field renders the reserved dark color") {
    const auto field = synthetic_field(3, 3, [](int, int) { return 0.0; },
                                       [](int, int) { return true; });
    const auto out = temp_dir() / "escaped.ppm";
    render_field_ppm(field, out);
    const auto img = parse_p6(read_bytes(out));
    for (std::size_t p = 0; p < img.pixels.size(); p += 3) {
        CHECK(static_cast<unsigned char>(img.pixels[p]) == kEscapedColor.r);
        CHECK(static_cast<unsigned char>(img.pixels[p + 1]) == kEscapedColor.g);
        CHECK(static_cast<unsigned char>(img.pixels[p + 2]) == kEscapedColor.b);
    }
    fs::remove(out);
}

TEST_CASE("extremes map to the colormap endpoints, axis 1 points up") {
    // value grows with k; bottom pixel row is k = 0
    const auto field = synthetic_field(2, 5, [](int, int k) { return static_cast<double>(k); });
    const auto out = temp_dir() / "ramp.ppm";
    render_field_ppm(field, out);
    const auto img = parse_p6(read_bytes(out));
    const auto& map = Colormap::viridis256().table();
    // top row = k = 4 = max -> last table entry; bottom row = first entry
    CHECK(static_cast<unsigned char>(img.pixels[0]) == map[255].r);
    const std::size_t bottom = 3UL * img.w * (img.h - 1);
    CHECK(static_cast<unsigned char>(img.pixels[bottom]) == map[0].r);
    fs::remove(out);
}

TEST_CASE("escaped color is not a colormap entry") {
    for (const auto& rgb : Colormap::viridis256().table()) {
        CHECK(!(rgb.r == kEscapedColor.r && rgb.g == kEscapedColor.g &&
                rgb.b == kEscapedColor.b));
    }
}

TEST_CASE("embedded colormap matches the shipped data file, checksummed") {
    const fs::path data_file = fs::path(QPART_DATA_DIR) / "colormap_viridis256.txt";
    std::ifstream in(data_file);
    REQUIRE(in.good());
    std::string line;
    std::vector<Rgb> parsed;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') {
            continue;
        }
        std::istringstream row(line);
        int idx = 0, r = 0, g = 0, b = 0;
        row >> idx >> r >> g >> b;
        REQUIRE(idx == static_cast<int>(parsed.size()));
        parsed.push_back({static_cast<std::uint8_t>(r), static_cast<std::uint8_t>(g),
                          static_cast<std::uint8_t>(b)});
    }
    REQUIRE(parsed.size() == 256);
    const auto& table = Colormap::viridis256().table();
    for (int i = 0; i < 256; ++i) {
        CHECK(parsed[i].r == table[i].r);
        CHECK(parsed[i].g == table[i].g);
        CHECK(parsed[i].b == table[i].b);
    }
    const auto file_sum = fnv1a64(std::as_bytes(std::span<const Rgb>(parsed)));
    CHECK(file_sum == Colormap::viridis256().checksum());
}

TEST_CASE("render_file dispatches on the container magic") {
    const auto field = synthetic_field(4, 4, [](int i, int k) { return i + 2.0 * k; });
    const auto dir = temp_dir();
    const auto field_path = dir / "dispatch.qpfield";
    save_field(field, field_path);
    const auto field_ppm = dir / "dispatch_field.ppm";
    render_file(field_path, field_ppm);
    CHECK(parse_p6(read_bytes(field_ppm)).w == 4);

    const std::vector<TimeAverageField> fields{field};
    const auto partition = joint_level_sets(fields);
    const auto part_path = dir / "dispatch.qppart";
    save_partition(partition, part_path);
    const auto part_ppm = dir / "dispatch_part.ppm";
    render_file(part_path, part_ppm);
    CHECK(parse_p6(read_bytes(part_ppm)).w == 4);

    fs::remove(field_path);
    fs::remove(field_ppm);
    fs::remove(part_path);
    fs::remove(part_ppm);
}

} // TEST_SUITE
