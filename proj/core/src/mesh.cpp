#include "envtool/mesh.hpp"

#include <cstdio>
#include <fstream>

#include "envtool/errors.hpp"

namespace envtool {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void ObjWriter::object(const std::string& tag) {
    buf_ += "o ";
    buf_ += tag;
    buf_ += '\n';
}

std::size_t ObjWriter::vertex(const Vec3& p) {
    buf_ += "v ";
    buf_ += fmt17(p.x);
    buf_ += ' ';
    buf_ += fmt17(p.y);
    buf_ += ' ';
    buf_ += fmt17(p.z);
    buf_ += '\n';
    return ++count_;
}

void ObjWriter::quad(std::size_t a, std::size_t b, std::size_t c, std::size_t d) {
    buf_ += "f " + std::to_string(a) + ' ' + std::to_string(b) + ' ' + std::to_string(c) + ' ' +
            std::to_string(d) + '\n';
}

void ObjWriter::polyline(const std::vector<std::size_t>& idx, bool closed) {
    if (idx.empty()) return;
    buf_ += "l";
    for (std::size_t i : idx) buf_ += ' ' + std::to_string(i);
    if (closed) buf_ += ' ' + std::to_string(idx.front());
    buf_ += '\n';
}

void ObjWriter::point(std::size_t a) { buf_ += "p " + std::to_string(a) + '\n'; }

void ObjWriter::comment(const std::string& text) { buf_ += "# " + text + '\n'; }

void ObjWriter::save(const std::string& path) const { writeFile(path, buf_); }

CsvWriter::CsvWriter(const std::vector<std::string>& header) {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) buf_ += ',';
        buf_ += header[i];
    }
    buf_ += '\n';
}

void CsvWriter::row(const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) buf_ += ',';
        buf_ += fields[i];
    }
    buf_ += '\n';
}

void CsvWriter::comment(const std::string& text) { buf_ += "# " + text + '\n'; }

void CsvWriter::save(const std::string& path) const { writeFile(path, buf_); }

GridMesh emitGridMesh(ObjWriter& w, const GridSpec& grid,
                      const std::vector<std::optional<Vec3>>& samples) {
    GridMesh m;
    m.vertexIndex.assign(grid.size(), std::nullopt);
    for (std::size_t j = 0; j < grid.nv; ++j)
        for (std::size_t i = 0; i < grid.nu; ++i) {
            const std::size_t k = grid.index(i, j);
            if (samples[k]) m.vertexIndex[k] = w.vertex(*samples[k]);
        }
    for (std::size_t j = 0; j + 1 < grid.nv; ++j)
        for (std::size_t i = 0; i + 1 < grid.nu; ++i) {
            const auto a = m.vertexIndex[grid.index(i, j)];
            const auto b = m.vertexIndex[grid.index(i + 1, j)];
            const auto c = m.vertexIndex[grid.index(i + 1, j + 1)];
            const auto d = m.vertexIndex[grid.index(i, j + 1)];
            if (a && b && c && d) {
                w.quad(*a, *b, *c, *d);
                ++m.emitted;
            }
        }
    return m;
}

void writeFile(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write file: " + path);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error("short write: " + path);
}

}  // namespace envtool
