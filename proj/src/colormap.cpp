#include "qpart/render.hpp"

#include "qpart/field_io.hpp"

namespace qpart {

// viridis, sampled at 256 points, 8-bit RGB
const Colormap& Colormap::viridis256() {
    static const Colormap map("viridis256", std::array<Rgb, 256>{{
        Rgb{68, 1, 84}, Rgb{68, 2, 86}, Rgb{69, 4, 87}, Rgb{69, 5, 89}, Rgb{70, 7, 90}, Rgb{70, 8, 92}, Rgb{70, 10, 93}, Rgb{70, 11, 94},
        Rgb{71, 13, 96}, Rgb{71, 14, 97}, Rgb{71, 16, 99}, Rgb{71, 17, 100}, Rgb{71, 19, 101}, Rgb{72, 20, 103}, Rgb{72, 22, 104}, Rgb{72, 23, 105},
        Rgb{72, 24, 106}, Rgb{72, 26, 108}, Rgb{72, 27, 109}, Rgb{72, 28, 110}, Rgb{72, 29, 111}, Rgb{72, 31, 112}, Rgb{72, 32, 113}, Rgb{72, 33, 115},
        Rgb{72, 35, 116}, Rgb{72, 36, 117}, Rgb{72, 37, 118}, Rgb{72, 38, 119}, Rgb{72, 40, 120}, Rgb{72, 41, 121}, Rgb{71, 42, 122}, Rgb{71, 44, 122},
        Rgb{71, 45, 123}, Rgb{71, 46, 124}, Rgb{71, 47, 125}, Rgb{70, 48, 126}, Rgb{70, 50, 126}, Rgb{70, 51, 127}, Rgb{70, 52, 128}, Rgb{69, 53, 129},
        Rgb{69, 55, 129}, Rgb{69, 56, 130}, Rgb{68, 57, 131}, Rgb{68, 58, 131}, Rgb{68, 59, 132}, Rgb{67, 61, 132}, Rgb{67, 62, 133}, Rgb{66, 63, 133},
        Rgb{66, 64, 134}, Rgb{66, 65, 134}, Rgb{65, 66, 135}, Rgb{65, 68, 135}, Rgb{64, 69, 136}, Rgb{64, 70, 136}, Rgb{63, 71, 136}, Rgb{63, 72, 137},
        Rgb{62, 73, 137}, Rgb{62, 74, 137}, Rgb{62, 76, 138}, Rgb{61, 77, 138}, Rgb{61, 78, 138}, Rgb{60, 79, 138}, Rgb{60, 80, 139}, Rgb{59, 81, 139},
        Rgb{59, 82, 139}, Rgb{58, 83, 139}, Rgb{58, 84, 140}, Rgb{57, 85, 140}, Rgb{57, 86, 140}, Rgb{56, 88, 140}, Rgb{56, 89, 140}, Rgb{55, 90, 140},
        Rgb{55, 91, 141}, Rgb{54, 92, 141}, Rgb{54, 93, 141}, Rgb{53, 94, 141}, Rgb{53, 95, 141}, Rgb{52, 96, 141}, Rgb{52, 97, 141}, Rgb{51, 98, 141},
        Rgb{51, 99, 141}, Rgb{50, 100, 142}, Rgb{50, 101, 142}, Rgb{49, 102, 142}, Rgb{49, 103, 142}, Rgb{49, 104, 142}, Rgb{48, 105, 142}, Rgb{48, 106, 142},
        Rgb{47, 107, 142}, Rgb{47, 108, 142}, Rgb{46, 109, 142}, Rgb{46, 110, 142}, Rgb{46, 111, 142}, Rgb{45, 112, 142}, Rgb{45, 113, 142}, Rgb{44, 113, 142},
        Rgb{44, 114, 142}, Rgb{44, 115, 142}, Rgb{43, 116, 142}, Rgb{43, 117, 142}, Rgb{42, 118, 142}, Rgb{42, 119, 142}, Rgb{42, 120, 142}, Rgb{41, 121, 142},
        Rgb{41, 122, 142}, Rgb{41, 123, 142}, Rgb{40, 124, 142}, Rgb{40, 125, 142}, Rgb{39, 126, 142}, Rgb{39, 127, 142}, Rgb{39, 128, 142}, Rgb{38, 129, 142},
        Rgb{38, 130, 142}, Rgb{38, 130, 142}, Rgb{37, 131, 142}, Rgb{37, 132, 142}, Rgb{37, 133, 142}, Rgb{36, 134, 142}, Rgb{36, 135, 142}, Rgb{35, 136, 142},
        Rgb{35, 137, 142}, Rgb{35, 138, 141}, Rgb{34, 139, 141}, Rgb{34, 140, 141}, Rgb{34, 141, 141}, Rgb{33, 142, 141}, Rgb{33, 143, 141}, Rgb{33, 144, 141},
        Rgb{33, 145, 140}, Rgb{32, 146, 140}, Rgb{32, 146, 140}, Rgb{32, 147, 140}, Rgb{31, 148, 140}, Rgb{31, 149, 139}, Rgb{31, 150, 139}, Rgb{31, 151, 139},
        Rgb{31, 152, 139}, Rgb{31, 153, 138}, Rgb{31, 154, 138}, Rgb{30, 155, 138}, Rgb{30, 156, 137}, Rgb{30, 157, 137}, Rgb{31, 158, 137}, Rgb{31, 159, 136},
        Rgb{31, 160, 136}, Rgb{31, 161, 136}, Rgb{31, 161, 135}, Rgb{31, 162, 135}, Rgb{32, 163, 134}, Rgb{32, 164, 134}, Rgb{33, 165, 133}, Rgb{33, 166, 133},
        Rgb{34, 167, 133}, Rgb{34, 168, 132}, Rgb{35, 169, 131}, Rgb{36, 170, 131}, Rgb{37, 171, 130}, Rgb{37, 172, 130}, Rgb{38, 173, 129}, Rgb{39, 173, 129},
        Rgb{40, 174, 128}, Rgb{41, 175, 127}, Rgb{42, 176, 127}, Rgb{44, 177, 126}, Rgb{45, 178, 125}, Rgb{46, 179, 124}, Rgb{47, 180, 124}, Rgb{49, 181, 123},
        Rgb{50, 182, 122}, Rgb{52, 182, 121}, Rgb{53, 183, 121}, Rgb{55, 184, 120}, Rgb{56, 185, 119}, Rgb{58, 186, 118}, Rgb{59, 187, 117}, Rgb{61, 188, 116},
        Rgb{63, 188, 115}, Rgb{64, 189, 114}, Rgb{66, 190, 113}, Rgb{68, 191, 112}, Rgb{70, 192, 111}, Rgb{72, 193, 110}, Rgb{74, 193, 109}, Rgb{76, 194, 108},
        Rgb{78, 195, 107}, Rgb{80, 196, 106}, Rgb{82, 197, 105}, Rgb{84, 197, 104}, Rgb{86, 198, 103}, Rgb{88, 199, 101}, Rgb{90, 200, 100}, Rgb{92, 200, 99},
        Rgb{94, 201, 98}, Rgb{96, 202, 96}, Rgb{99, 203, 95}, Rgb{101, 203, 94}, Rgb{103, 204, 92}, Rgb{105, 205, 91}, Rgb{108, 205, 90}, Rgb{110, 206, 88},
        Rgb{112, 207, 87}, Rgb{115, 208, 86}, Rgb{117, 208, 84}, Rgb{119, 209, 83}, Rgb{122, 209, 81}, Rgb{124, 210, 80}, Rgb{127, 211, 78}, Rgb{129, 211, 77},
        Rgb{132, 212, 75}, Rgb{134, 213, 73}, Rgb{137, 213, 72}, Rgb{139, 214, 70}, Rgb{142, 214, 69}, Rgb{144, 215, 67}, Rgb{147, 215, 65}, Rgb{149, 216, 64},
        Rgb{152, 216, 62}, Rgb{155, 217, 60}, Rgb{157, 217, 59}, Rgb{160, 218, 57}, Rgb{162, 218, 55}, Rgb{165, 219, 54}, Rgb{168, 219, 52}, Rgb{170, 220, 50},
        Rgb{173, 220, 48}, Rgb{176, 221, 47}, Rgb{178, 221, 45}, Rgb{181, 222, 43}, Rgb{184, 222, 41}, Rgb{186, 222, 40}, Rgb{189, 223, 38}, Rgb{192, 223, 37},
        Rgb{194, 223, 35}, Rgb{197, 224, 33}, Rgb{200, 224, 32}, Rgb{202, 225, 31}, Rgb{205, 225, 29}, Rgb{208, 225, 28}, Rgb{210, 226, 27}, Rgb{213, 226, 26},
        Rgb{216, 226, 25}, Rgb{218, 227, 25}, Rgb{221, 227, 24}, Rgb{223, 227, 24}, Rgb{226, 228, 24}, Rgb{229, 228, 25}, Rgb{231, 228, 25}, Rgb{234, 229, 26},
        Rgb{236, 229, 27}, Rgb{239, 229, 28}, Rgb{241, 229, 29}, Rgb{244, 230, 30}, Rgb{246, 230, 32}, Rgb{248, 230, 33}, Rgb{251, 231, 35}, Rgb{253, 231, 37},
    }});
    return map;
}

Colormap::Colormap(const char* name, std::array<Rgb, 256> table)
    : name_(name), table_(table) {}

std::uint64_t Colormap::checksum() const {
    static_assert(sizeof(Rgb) == 3);
    return fnv1a64(std::as_bytes(std::span<const Rgb>(table_)));
}

Rgb Colormap::at_fraction(double t) const {
    if (!(t > 0.0)) {
        t = 0.0;
    }
    if (t > 1.0) {
        t = 1.0;
    }
    const int idx = static_cast<int>(t * 255.0 + 0.5);
    return table_[static_cast<std::size_t>(idx)];
}

} // namespace qpart
