#pragma once

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "vclod/mesh.hpp"
#include "vclod/version.hpp"

namespace vclod {

namespace detail {

// Locale-independent text form: up to 9 significant digits, which is
// what the OBJ writer promises to round-trip.
inline std::string format_double9(double v) {
    char buf[48];
    auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 9);
    return std::string(buf, res.ptr);
}

inline bool parse_double(std::string_view token, double& out) {
    const char* first = token.data();
    const char* last = token.data() + token.size();
    auto res = std::from_chars(first, last, out);
    return res.ec == std::errc{} && res.ptr == last;
}

inline std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
        if (j > i) out.push_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

} // namespace detail

// Reads the v/f subset of Wavefront OBJ. Normals, texture
// coordinates, materials and groups are skipped. Faces with more than
// three corners are fan-triangulated: (v1,v2,v3), (v1,v3,v4), ...
inline TriangleMesh load_obj(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());

    TriangleMesh mesh;
    mesh.name = path.stem().string();
    std::string line;
    std::size_t line_no = 0;

    auto fail = [&](const std::string& what) {
        throw ValidationError(path.string() + ":" + std::to_string(line_no) + ": " + what);
    };

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto tokens = detail::split_ws(line);
        if (tokens.empty() || tokens[0][0] == '#') continue;

        if (tokens[0] == "v") {
            if (tokens.size() < 4) fail("vertex record needs 3 coordinates");
            Vec3 p;
            if (!detail::parse_double(tokens[1], p.x) || !detail::parse_double(tokens[2], p.y) ||
                !detail::parse_double(tokens[3], p.z))
                fail("malformed vertex coordinate");
            mesh.vertices.push_back(p);
        } else if (tokens[0] == "f") {
            if (tokens.size() < 4) fail("face record needs at least 3 vertices");
            std::vector<int> corners;
            corners.reserve(tokens.size() - 1);
            for (std::size_t k = 1; k < tokens.size(); ++k) {
                // accept i, i/t, i//n, i/t/n; only the vertex index is used
                std::string_view tok = tokens[k];
                const std::size_t slash = tok.find('/');
                if (slash != std::string_view::npos) tok = tok.substr(0, slash);
                int idx = 0;
                auto res = std::from_chars(tok.data(), tok.data() + tok.size(), idx);
                if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size())
                    fail("malformed face index '" + std::string(tokens[k]) + "'");
                if (idx <= 0) fail("face index must be positive (1-based)");
                corners.push_back(idx - 1);
            }
            for (std::size_t k = 1; k + 1 < corners.size(); ++k)
                mesh.triangles.push_back({corners[0], corners[k], corners[k + 1]});
        }
        // every other record type is outside the supported subset
    }

    validate_indices(mesh);
    return mesh;
}

// Writes v/f records with 9-significant-digit coordinates. Extra
// comment lines (tool version, seeds) go right after the banner.
// Output is byte-deterministic for a given mesh.
inline void save_obj(const TriangleMesh& mesh, const std::filesystem::path& path,
                     const std::vector<std::string>& comments = {}) {
    if (mesh.triangles.empty())
        throw ValidationError("refusing to write empty mesh (zero triangles) to " + path.string());
    validate_indices(mesh);

    std::ostringstream out;
    out << "# " << kToolName << " " << kVersion << "\n";
    for (const std::string& c : comments) out << "# " << c << "\n";
    if (!mesh.name.empty()) out << "o " << mesh.name << "\n";
    for (const Vec3& v : mesh.vertices)
        out << "v " << detail::format_double9(v.x) << " " << detail::format_double9(v.y) << " "
            << detail::format_double9(v.z) << "\n";
    for (const auto& t : mesh.triangles)
        out << "f " << (t[0] + 1) << " " << (t[1] + 1) << " " << (t[2] + 1) << "\n";

    std::ofstream file(path, std::ios::binary);
    if (!file) throw IoError("cannot write " + path.string());
    const std::string text = out.str();
    file.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!file) throw IoError("write failed for " + path.string());
}

} // namespace vclod
