#pragma once

#include <landsite/core_types.hpp>
#include <landsite/pointclass.hpp>

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace landsite {

struct LoadedCloud {
    ClassifiedPointCloud cloud;
    /// False when the file carried only "x y z"; classes are then kUnlabeled.
    bool has_classes = false;
};

namespace detail {

inline std::vector<std::string_view> split_ws(std::string_view line)
{
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        std::size_t j = i;
        while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
        if (j > i) out.push_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

inline double parse_double(std::string_view tok, std::size_t line)
{
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
        throw ParseError("invalid number '" + std::string(tok) + "'", line);
    }
    if (!std::isfinite(v)) {
        throw ParseError("non-finite coordinate '" + std::string(tok) + "'", line);
    }
    return v;
}

} // namespace detail

/// Parses "x y z" or "x y z class" lines. Blank lines and lines starting
/// with '#' are skipped. All data lines must agree on the column count.
inline LoadedCloud parse_point_cloud(std::istream& in)
{
    std::vector<Point3> points;
    std::vector<ClassId> classes;
    std::optional<std::size_t> columns;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto toks = detail::split_ws(line);
        if (toks.empty() || toks[0].front() == '#') continue;
        if (toks.size() != 3 && toks.size() != 4) {
            throw ParseError("expected 3 or 4 columns, got " + std::to_string(toks.size()), lineno);
        }
        if (columns && *columns != toks.size()) {
            throw ParseError("inconsistent column count", lineno);
        }
        columns = toks.size();
        points.push_back({detail::parse_double(toks[0], lineno), detail::parse_double(toks[1], lineno),
                          detail::parse_double(toks[2], lineno)});
        if (toks.size() == 4) {
            long c = -1;
            auto [ptr, ec] = std::from_chars(toks[3].data(), toks[3].data() + toks[3].size(), c);
            if (ec != std::errc{} || ptr != toks[3].data() + toks[3].size() || c < 0 || c > 65535) {
                throw ParseError("invalid class id '" + std::string(toks[3]) + "'", lineno);
            }
            classes.push_back(static_cast<ClassId>(c));
        }
    }
    LoadedCloud out;
    out.has_classes = columns.value_or(3) == 4;
    if (!out.has_classes) classes.assign(points.size(), kUnlabeled);
    out.cloud = ClassifiedPointCloud(std::move(points), std::move(classes));
    return out;
}

inline LoadedCloud load_point_cloud(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw IoError("cannot open point cloud '" + path + "'");
    try {
        return parse_point_cloud(in);
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what(), e.line());
    }
}

/// Writes with 17 significant digits so a reload is bit-identical.
inline void write_point_cloud(std::ostream& out, const ClassifiedPointCloud& cloud, bool with_classes = true)
{
    out << "# x y z" << (with_classes ? " class" : "") << '\n';
    out << std::setprecision(17);
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        const auto& p = cloud.point(i);
        out << p.x << ' ' << p.y << ' ' << p.z;
        if (with_classes) out << ' ' << cloud.cls(i);
        out << '\n';
    }
}

inline void save_point_cloud(const std::string& path, const ClassifiedPointCloud& cloud, bool with_classes = true)
{
    std::ofstream out(path);
    if (!out) throw IoError("cannot write '" + path + "'");
    write_point_cloud(out, cloud, with_classes);
    if (!out) throw IoError("write failed for '" + path + "'");
}

namespace detail {

inline std::string pgm_token(std::istream& in)
{
    std::string tok;
    char c = 0;
    while (in.get(c)) {
        if (c == '#') {
            std::string skip;
            std::getline(in, skip);
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c))) {
            if (!tok.empty()) break;
            continue;
        }
        tok.push_back(c);
    }
    return tok;
}

inline int pgm_int(std::istream& in, const char* what)
{
    std::string tok = pgm_token(in);
    int v = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (tok.empty() || ec != std::errc{} || ptr != tok.data() + tok.size() || v < 0) {
        throw ParseError(std::string("PGM: bad ") + what);
    }
    return v;
}

} // namespace detail

/// Binary PGM (P5). 16-bit samples are big-endian; 8-bit files are accepted too.
inline LabelImage read_pgm(std::istream& in)
{
    if (detail::pgm_token(in) != "P5") throw ParseError("PGM: expected P5 magic");
    const int w = detail::pgm_int(in, "width");
    const int h = detail::pgm_int(in, "height");
    const int maxval = detail::pgm_int(in, "maxval");
    if (maxval < 1 || maxval > 65535) throw ParseError("PGM: maxval out of range");
    LabelImage img(w, h);
    const bool wide = maxval > 255;
    for (auto& px : img.labels) {
        int hi = in.get();
        if (hi == EOF) throw ParseError("PGM: truncated pixel data");
        int value = hi;
        if (wide) {
            int lo = in.get();
            if (lo == EOF) throw ParseError("PGM: truncated pixel data");
            value = (hi << 8) | lo;
        }
        if (value > maxval) throw ParseError("PGM: sample exceeds maxval");
        px = static_cast<ClassId>(value);
    }
    return img;
}

inline LabelImage load_pgm(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open label image '" + path + "'");
    try {
        return read_pgm(in);
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what());
    }
}

/// Always 16-bit, maxval 65535.
inline void write_pgm(std::ostream& out, const LabelImage& img)
{
    out << "P5\n" << img.width << ' ' << img.height << "\n65535\n";
    for (ClassId v : img.labels) {
        out.put(static_cast<char>((v >> 8) & 0xff));
        out.put(static_cast<char>(v & 0xff));
    }
}

inline void save_pgm(const std::string& path, const LabelImage& img)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path + "'");
    write_pgm(out, img);
    if (!out) throw IoError("write failed for '" + path + "'");
}

} // namespace landsite
