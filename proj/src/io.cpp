#include "sck/io.hpp"

#include <array>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace sck {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw std::runtime_error(path + ": " + what);
}

std::ifstream open_in(const std::string& path, bool binary) {
    std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
    if (!in) fail(path, "cannot open for reading");
    return in;
}

std::ofstream open_out(const std::string& path, bool binary) {
    std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
    if (!out) fail(path, "cannot open for writing");
    return out;
}

template <typename T>
void write_le(std::ostream& out, T value) {
    // host is little-endian; raw write keeps the on-disk layout
    out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T read_le(std::istream& in, const std::string& path) {
    T value;
    in.read(reinterpret_cast<char*>(&value), sizeof(T));
    if (!in) fail(path, "truncated file");
    return value;
}

void expect_magic(std::istream& in, const std::string& path, const char* magic) {
    std::array<char, 4> got{};
    in.read(got.data(), 4);
    if (!in || std::memcmp(got.data(), magic, 4) != 0) fail(path, "bad magic");
}

// --- PLY ---------------------------------------------------------------

enum class PlyType { f32, f64, u8, i8, u16, i16, u32, i32 };

std::size_t ply_type_size(PlyType t) {
    switch (t) {
        case PlyType::f32: return 4;
        case PlyType::f64: return 8;
        case PlyType::u8:
        case PlyType::i8: return 1;
        case PlyType::u16:
        case PlyType::i16: return 2;
        default: return 4;
    }
}

PlyType parse_ply_type(const std::string& name, const std::string& path) {
    if (name == "float" || name == "float32") return PlyType::f32;
    if (name == "double" || name == "float64") return PlyType::f64;
    if (name == "uchar" || name == "uint8") return PlyType::u8;
    if (name == "char" || name == "int8") return PlyType::i8;
    if (name == "ushort" || name == "uint16") return PlyType::u16;
    if (name == "short" || name == "int16") return PlyType::i16;
    if (name == "uint" || name == "uint32") return PlyType::u32;
    if (name == "int" || name == "int32") return PlyType::i32;
    fail(path, "unsupported property type " + name);
}

double read_ply_scalar(std::istream& in, PlyType t, const std::string& path) {
    switch (t) {
        case PlyType::f32: return read_le<float>(in, path);
        case PlyType::f64: return read_le<double>(in, path);
        case PlyType::u8: return read_le<std::uint8_t>(in, path);
        case PlyType::i8: return read_le<std::int8_t>(in, path);
        case PlyType::u16: return read_le<std::uint16_t>(in, path);
        case PlyType::i16: return read_le<std::int16_t>(in, path);
        case PlyType::u32: return read_le<std::uint32_t>(in, path);
        case PlyType::i32: return read_le<std::int32_t>(in, path);
    }
    return 0.0;
}

struct PlyProperty {
    std::string name;
    PlyType type = PlyType::f32;
};

}  // namespace

PointCloud read_ply(const std::string& path) {
    auto in = open_in(path, true);
    std::string line;
    if (!std::getline(in, line)) fail(path, "empty file");
    if (line.size() && line.back() == '\r') line.pop_back();
    if (line != "ply") fail(path, "not a PLY file");

    bool binary = false;
    bool format_seen = false;
    std::size_t vertex_count = 0;
    std::vector<PlyProperty> props;
    bool in_vertex_element = false;
    bool vertex_seen = false;

    while (std::getline(in, line)) {
        if (line.size() && line.back() == '\r') line.pop_back();
        std::istringstream ls(line);
        std::string token;
        ls >> token;
        if (token == "comment" || token.empty()) continue;
        if (token == "format") {
            std::string fmt;
            ls >> fmt;
            if (fmt == "ascii") binary = false;
            else if (fmt == "binary_little_endian") binary = true;
            else fail(path, "unsupported format " + fmt);
            format_seen = true;
        } else if (token == "element") {
            std::string name;
            std::size_t count = 0;
            ls >> name >> count;
            if (name == "vertex") {
                if (vertex_seen) fail(path, "duplicate vertex element");
                vertex_seen = true;
                in_vertex_element = true;
                vertex_count = count;
            } else {
                if (!vertex_seen) fail(path, "vertex must be the first element");
                in_vertex_element = false;
            }
        } else if (token == "property") {
            if (!in_vertex_element) continue;  // trailing elements are ignored
            std::string type_name;
            ls >> type_name;
            if (type_name == "list") fail(path, "list properties unsupported on vertices");
            PlyProperty p;
            p.type = parse_ply_type(type_name, path);
            ls >> p.name;
            props.push_back(p);
        } else if (token == "end_header") {
            break;
        } else {
            fail(path, "unexpected header token " + token);
        }
    }
    if (!format_seen || !vertex_seen) fail(path, "incomplete header");

    PointCloud cloud;
    cloud.positions.resize(vertex_count);
    int have_xyz = 0;
    bool have_color = false, have_label = false, have_instance = false;
    for (const auto& p : props) {
        if (p.name == "x" || p.name == "y" || p.name == "z") ++have_xyz;
        if (p.name == "red") have_color = true;
        if (p.name == "label") have_label = true;
        if (p.name == "instance_id") have_instance = true;
    }
    if (have_xyz != 3) fail(path, "vertex element must carry x, y, z");
    if (have_color) cloud.colors.resize(vertex_count);
    if (have_label) cloud.semantic_labels.resize(vertex_count);
    if (have_instance) cloud.instance_labels.resize(vertex_count);

    for (std::size_t v = 0; v < vertex_count; ++v) {
        double values_line[16];
        if (!binary) {
            if (props.size() > 16) fail(path, "too many vertex properties");
            for (std::size_t c = 0; c < props.size(); ++c)
                if (!(in >> values_line[c])) fail(path, "truncated vertex data");
        }
        for (std::size_t c = 0; c < props.size(); ++c) {
            const double value =
                binary ? read_ply_scalar(in, props[c].type, path) : values_line[c];
            const std::string& name = props[c].name;
            if (name == "x") cloud.positions[v].x() = value;
            else if (name == "y") cloud.positions[v].y() = value;
            else if (name == "z") cloud.positions[v].z() = value;
            else if (name == "red") cloud.colors[v][0] = static_cast<std::uint8_t>(value);
            else if (name == "green") cloud.colors[v][1] = static_cast<std::uint8_t>(value);
            else if (name == "blue") cloud.colors[v][2] = static_cast<std::uint8_t>(value);
            else if (name == "label") cloud.semantic_labels[v] = static_cast<int>(value);
            else if (name == "instance_id") cloud.instance_labels[v] = static_cast<int>(value);
        }
    }
    cloud.validate();
    return cloud;
}

void write_ply(const std::string& path, const PointCloud& cloud, bool binary) {
    cloud.validate();
    auto out = open_out(path, true);
    out << "ply\n";
    out << "format " << (binary ? "binary_little_endian" : "ascii") << " 1.0\n";
    out << "element vertex " << cloud.size() << "\n";
    out << "property float x\nproperty float y\nproperty float z\n";
    if (cloud.has_colors())
        out << "property uchar red\nproperty uchar green\nproperty uchar blue\n";
    if (cloud.has_semantics()) out << "property int label\n";
    if (cloud.has_instances()) out << "property int instance_id\n";
    out << "end_header\n";

    for (std::size_t i = 0; i < cloud.size(); ++i) {
        const Eigen::Vector3f p = cloud.positions[i].cast<float>();
        if (binary) {
            write_le(out, p.x());
            write_le(out, p.y());
            write_le(out, p.z());
            if (cloud.has_colors())
                for (int c = 0; c < 3; ++c) write_le(out, cloud.colors[i][c]);
            if (cloud.has_semantics()) write_le(out, static_cast<std::int32_t>(cloud.semantic_labels[i]));
            if (cloud.has_instances()) write_le(out, static_cast<std::int32_t>(cloud.instance_labels[i]));
        } else {
            out.precision(9);
            out << p.x() << " " << p.y() << " " << p.z();
            if (cloud.has_colors())
                out << " " << int(cloud.colors[i][0]) << " " << int(cloud.colors[i][1]) << " "
                    << int(cloud.colors[i][2]);
            if (cloud.has_semantics()) out << " " << cloud.semantic_labels[i];
            if (cloud.has_instances()) out << " " << cloud.instance_labels[i];
            out << "\n";
        }
    }
    if (!out) fail(path, "write failed");
}

Pose read_pose(const std::string& path) {
    auto in = open_in(path, false);
    double m[16];
    for (double& v : m)
        if (!(in >> v)) fail(path, "expected 16 numbers");
    const double expected[4] = {0.0, 0.0, 0.0, 1.0};
    for (int c = 0; c < 4; ++c)
        if (m[12 + c] != expected[c]) fail(path, "last row must be 0 0 0 1");
    Pose pose;
    for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) pose.rotation(r, c) = m[4 * r + c];
        pose.translation[r] = m[4 * r + 3];
    }
    if (!pose.is_rigid()) fail(path, "rotation is not orthonormal");
    return pose;
}

void write_pose(const std::string& path, const Pose& pose) {
    auto out = open_out(path, false);
    out.precision(17);
    for (int r = 0; r < 3; ++r)
        out << pose.rotation(r, 0) << " " << pose.rotation(r, 1) << " " << pose.rotation(r, 2)
            << " " << pose.translation[r] << "\n";
    out << "0 0 0 1\n";
    if (!out) fail(path, "write failed");
}

FeatureMatrix read_features(const std::string& path) {
    auto in = open_in(path, true);
    expect_magic(in, path, "FTRS");
    const auto rows = read_le<std::uint32_t>(in, path);
    const auto dim = read_le<std::uint32_t>(in, path);
    FeatureMatrix f;
    f.values.resize(rows, dim);
    for (std::uint32_t r = 0; r < rows; ++r)
        for (std::uint32_t d = 0; d < dim; ++d) f.values(r, d) = read_le<float>(in, path);
    return f;
}

void write_features(const std::string& path, const FeatureMatrix& features) {
    auto out = open_out(path, true);
    out.write("FTRS", 4);
    write_le(out, static_cast<std::uint32_t>(features.values.rows()));
    write_le(out, static_cast<std::uint32_t>(features.values.cols()));
    for (Eigen::Index r = 0; r < features.values.rows(); ++r)
        for (Eigen::Index d = 0; d < features.values.cols(); ++d)
            write_le(out, static_cast<float>(features.values(r, d)));
    if (!out) fail(path, "write failed");
}

std::vector<Eigen::Vector3d> read_offsets(const std::string& path) {
    auto in = open_in(path, true);
    expect_magic(in, path, "OFFS");
    const auto count = read_le<std::uint32_t>(in, path);
    std::vector<Eigen::Vector3d> offsets(count);
    for (auto& o : offsets)
        for (int c = 0; c < 3; ++c) o[c] = read_le<float>(in, path);
    return offsets;
}

void write_offsets(const std::string& path, const std::vector<Eigen::Vector3d>& offsets) {
    auto out = open_out(path, true);
    out.write("OFFS", 4);
    write_le(out, static_cast<std::uint32_t>(offsets.size()));
    for (const auto& o : offsets)
        for (int c = 0; c < 3; ++c) write_le(out, static_cast<float>(o[c]));
    if (!out) fail(path, "write failed");
}

std::vector<std::uint8_t> read_mask(const std::string& path) {
    auto in = open_in(path, true);
    expect_magic(in, path, "MASK");
    const auto count = read_le<std::uint32_t>(in, path);
    std::vector<std::uint8_t> mask(count);
    in.read(reinterpret_cast<char*>(mask.data()), count);
    if (!in) fail(path, "truncated file");
    return mask;
}

void write_mask(const std::string& path, const std::vector<std::uint8_t>& mask) {
    auto out = open_out(path, true);
    out.write("MASK", 4);
    write_le(out, static_cast<std::uint32_t>(mask.size()));
    out.write(reinterpret_cast<const char*>(mask.data()),
              static_cast<std::streamsize>(mask.size()));
    if (!out) fail(path, "write failed");
}

CorrespondenceSet read_correspondences_text(const std::string& path, double* overlap) {
    auto in = open_in(path, false);
    std::string header;
    if (!std::getline(in, header)) fail(path, "empty file");
    CorrespondenceSet set;
    double ratio = 0.0;
    if (std::sscanf(header.c_str(), "# match_radius=%lf overlap=%lf", &set.match_radius, &ratio) != 2)
        fail(path, "bad header line");
    if (overlap) *overlap = ratio;
    int i, j;
    while (in >> i >> j) set.pairs.emplace_back(i, j);
    set.validate();
    return set;
}

void write_correspondences_text(const std::string& path, const CorrespondenceSet& set,
                                double overlap) {
    auto out = open_out(path, false);
    out.precision(17);
    out << "# match_radius=" << set.match_radius << " overlap=" << overlap << "\n";
    for (const auto& [i, j] : set.pairs) out << i << " " << j << "\n";
    if (!out) fail(path, "write failed");
}

CorrespondenceSet read_correspondences_binary(const std::string& path) {
    auto in = open_in(path, true);
    expect_magic(in, path, "CORR");
    const auto count = read_le<std::uint32_t>(in, path);
    CorrespondenceSet set;
    set.pairs.reserve(count);
    for (std::uint32_t k = 0; k < count; ++k) {
        const auto i = read_le<std::uint32_t>(in, path);
        const auto j = read_le<std::uint32_t>(in, path);
        set.pairs.emplace_back(static_cast<int>(i), static_cast<int>(j));
    }
    set.validate();
    return set;
}

void write_correspondences_binary(const std::string& path, const CorrespondenceSet& set) {
    auto out = open_out(path, true);
    out.write("CORR", 4);
    write_le(out, static_cast<std::uint32_t>(set.pairs.size()));
    for (const auto& [i, j] : set.pairs) {
        write_le(out, static_cast<std::uint32_t>(i));
        write_le(out, static_cast<std::uint32_t>(j));
    }
    if (!out) fail(path, "write failed");
}

}  // namespace sck
