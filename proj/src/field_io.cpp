#include "qpart/field_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include "json_util.hpp"

namespace qpart {

namespace {

using detail::json;

void append_u32(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) {
        out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
    }
}

std::uint32_t read_u32(const char* p) {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) {
        v |= static_cast<std::uint32_t>(static_cast<unsigned char>(p[i])) << (8 * i);
    }
    return v;
}

void append_f64(std::string& out, double x) {
    const auto bits = std::bit_cast<std::uint64_t>(x);
    for (int i = 0; i < 8; ++i) {
        out.push_back(static_cast<char>((bits >> (8 * i)) & 0xff));
    }
}

double read_f64(const char* p) {
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) {
        bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(p[i])) << (8 * i);
    }
    return std::bit_cast<double>(bits);
}

void append_i32(std::string& out, std::int32_t v) {
    append_u32(out, static_cast<std::uint32_t>(v));
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open '" + path.string() + "'");
    }
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (!in.good() && !in.eof()) {
        throw IoError("read failure on '" + path.string() + "'");
    }
    return bytes;
}

struct Container {
    json header;
    std::string body;
};

std::string assemble(const char magic[8], json header, const std::string& body) {
    header["body_checksum"] = checksum_hex(fnv1a64(std::span<const char>(body)));
    const std::string header_bytes = header.dump();
    std::string out;
    out.reserve(8 + 4 + header_bytes.size() + body.size());
    out.append(magic, 8);
    append_u32(out, static_cast<std::uint32_t>(header_bytes.size()));
    out += header_bytes;
    out += body;
    return out;
}

Container disassemble(const char magic[8], const std::string& bytes,
                      const std::filesystem::path& path) {
    if (bytes.size() < 12 || std::memcmp(bytes.data(), magic, 8) != 0) {
        throw IoError("'" + path.string() + "': bad magic, not the expected container");
    }
    const std::uint32_t header_len = read_u32(bytes.data() + 8);
    if (bytes.size() < 12 + static_cast<std::size_t>(header_len)) {
        throw IoError("'" + path.string() + "': truncated header");
    }
    Container c;
    try {
        c.header = json::parse(bytes.substr(12, header_len));
    } catch (const json::exception& e) {
        throw IoError("'" + path.string() + "': malformed header: " + e.what());
    }
    c.body = bytes.substr(12 + header_len);
    const std::string expected = c.header.value("body_checksum", "");
    const std::string actual = checksum_hex(fnv1a64(std::span<const char>(c.body)));
    if (expected != actual) {
        throw IoError("'" + path.string() + "': body checksum mismatch (file corrupted?)");
    }
    return c;
}

} // namespace

std::uint64_t fnv1a64(std::span<const std::byte> bytes) {
    std::uint64_t hash = 0xcbf29ce484222325ull;
    for (std::byte b : bytes) {
        hash ^= static_cast<std::uint64_t>(b);
        hash *= 0x100000001b3ull;
    }
    return hash;
}

std::uint64_t fnv1a64(std::span<const char> bytes) {
    return fnv1a64(std::as_bytes(bytes));
}

std::string checksum_hex(std::uint64_t value) {
    static const char* digits = "0123456789abcdef";
    std::string hex(16, '0');
    for (int i = 15; i >= 0; --i) {
        hex[i] = digits[value & 0xf];
        value >>= 4;
    }
    return hex;
}

void atomic_write(const std::filesystem::path& path, std::span<const char> bytes) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw IoError("cannot create '" + tmp.string() + "'");
        }
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        out.flush();
        if (!out.good()) {
            std::error_code ec;
            std::filesystem::remove(tmp, ec);
            throw IoError("write failure on '" + tmp.string() + "'");
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw IoError("cannot move '" + tmp.string() + "' to '" + path.string() + "'");
    }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    atomic_write(path, std::span<const char>(text.data(), text.size()));
}

void save_field(const TimeAverageField& field, const std::filesystem::path& path) {
    json header{
        {"format_version", 1},
        {"observable", field.observable_id()},
        {"dims", json::array({field.n1(), field.n2()})},
        {"domain", detail::domain_to_json(field.domain())},
        {"integrator", detail::integrator_config_to_json(field.integrator())},
        {"escape", field.escape_predicate() ? detail::escape_to_json(*field.escape_predicate())
                                             : json(nullptr)},
        {"gap_tolerance_factor", field.gap_tolerance_factor()},
        {"legend", {{"value", 0}, {"escaped", 1}, {"non_convergent", 2}}},
    };
    if (field.config_echo().empty()) {
        header["config"] = nullptr;
    } else {
        header["config"] = json::parse(field.config_echo());
    }
    std::string body;
    body.reserve(static_cast<std::size_t>(field.size()) * 9);
    for (long idx = 0; idx < field.size(); ++idx) {
        body.push_back(static_cast<char>(field.states()[idx]));
        append_f64(body, field.states()[idx] == CellState::escaped ? 0.0 : field.values()[idx]);
    }
    const std::string bytes = assemble(kFieldMagic, std::move(header), body);
    atomic_write(path, bytes);
}

TimeAverageField load_field(const std::filesystem::path& path) {
    Container c = disassemble(kFieldMagic, read_file(path), path);
    try {
        const ScanDomain domain = detail::domain_from_json(c.header.at("domain"));
        const IntegratorConfig integrator =
            detail::integrator_config_from_json(c.header.at("integrator"));
        std::optional<EscapePredicate> escape;
        if (!c.header.at("escape").is_null()) {
            escape = detail::escape_from_json(c.header.at("escape"));
        }
        TimeAverageField field(domain, c.header.at("observable").get<std::string>(), integrator,
                               escape);
        field.set_gap_tolerance_factor(c.header.at("gap_tolerance_factor").get<double>());
        if (c.header.contains("config") && !c.header.at("config").is_null()) {
            field.set_config_echo(c.header.at("config").dump());
        }
        const auto dims = c.header.at("dims");
        if (dims.size() != 2 || dims[0].get<int>() != field.n1() ||
            dims[1].get<int>() != field.n2()) {
            throw IoError("'" + path.string() + "': dims disagree with the domain");
        }
        if (c.body.size() != static_cast<std::size_t>(field.size()) * 9) {
            throw IoError("'" + path.string() + "': body size mismatch");
        }
        for (long idx = 0; idx < field.size(); ++idx) {
            const char* rec = c.body.data() + idx * 9;
            const auto state = static_cast<unsigned char>(rec[0]);
            if (state > 2) {
                throw IoError("'" + path.string() + "': invalid cell state byte");
            }
            field.states()[idx] = static_cast<CellState>(state);
            field.values()[idx] = read_f64(rec + 1);
        }
        return field;
    } catch (const json::exception& e) {
        throw IoError("'" + path.string() + "': header field error: " + e.what());
    }
}

void save_partition(const PartitionField& partition, const std::filesystem::path& path) {
    json labels = json::array();
    for (const auto& bins : partition.label_bins) {
        labels.push_back(bins);
    }
    json header{
        {"format_version", 1},
        {"dims", json::array({partition.n1(), partition.n2()})},
        {"domain", detail::domain_to_json(partition.domain)},
        {"observables", partition.observable_ids},
        {"bin_widths", partition.bin_widths},
        {"origins", partition.origins},
        {"label_bins", labels},
        {"escaped_label", PartitionField::kEscapedLabel},
    };
    std::string body;
    body.reserve(partition.labels.size() * 4);
    for (std::int32_t label : partition.labels) {
        append_i32(body, label);
    }
    const std::string bytes = assemble(kPartitionMagic, std::move(header), body);
    atomic_write(path, bytes);
}

PartitionField load_partition(const std::filesystem::path& path) {
    Container c = disassemble(kPartitionMagic, read_file(path), path);
    try {
        PartitionField part;
        part.domain = detail::domain_from_json(c.header.at("domain"));
        part.observable_ids = c.header.at("observables").get<std::vector<std::string>>();
        part.bin_widths = c.header.at("bin_widths").get<std::vector<double>>();
        part.origins = c.header.at("origins").get<std::vector<double>>();
        for (const auto& bins : c.header.at("label_bins")) {
            part.label_bins.push_back(bins.get<std::vector<std::int64_t>>());
        }
        const long cells = static_cast<long>(part.n1()) * part.n2();
        if (c.body.size() != static_cast<std::size_t>(cells) * 4) {
            throw IoError("'" + path.string() + "': body size mismatch");
        }
        part.labels.resize(cells);
        for (long idx = 0; idx < cells; ++idx) {
            part.labels[idx] =
                static_cast<std::int32_t>(read_u32(c.body.data() + idx * 4));
            const std::int32_t label = part.labels[idx];
            if (label != PartitionField::kEscapedLabel &&
                (label < 0 || static_cast<std::size_t>(label) >= part.label_bins.size())) {
                throw IoError("'" + path.string() + "': label index out of range");
            }
        }
        return part;
    } catch (const json::exception& e) {
        throw IoError("'" + path.string() + "': header field error: " + e.what());
    }
}

ContainerKind probe_container(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open '" + path.string() + "'");
    }
    char magic[8] = {};
    in.read(magic, 8);
    if (in.gcount() == 8 && std::memcmp(magic, kFieldMagic, 8) == 0) {
        return ContainerKind::field;
    }
    if (in.gcount() == 8 && std::memcmp(magic, kPartitionMagic, 8) == 0) {
        return ContainerKind::partition;
    }
    throw IoError("'" + path.string() + "': unrecognized container magic");
}

} // namespace qpart
