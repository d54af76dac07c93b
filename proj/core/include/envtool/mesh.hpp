#pragma once

#include <optional>
#include <string>
#include <vector>

#include "envtool/domain.hpp"
#include "envtool/vec.hpp"

namespace envtool {

// 17-significant-digit formatting; the bit-exact contract for OBJ/CSV
// golden-file comparisons.
std::string fmt17(double v);

// Streaming Wavefront OBJ writer. Vertices are 1-based; components are
// separated by "o <tag>" lines. Circles export as closed polylines ('l'),
// point clouds as 'p' statements. LF line endings.
class ObjWriter {
public:
    void object(const std::string& tag);
    std::size_t vertex(const Vec3& p);  // returns the 1-based index
    void quad(std::size_t a, std::size_t b, std::size_t c, std::size_t d);
    void polyline(const std::vector<std::size_t>& idx, bool closed);
    void point(std::size_t a);
    void comment(const std::string& text);

    const std::string& text() const { return buf_; }
    void save(const std::string& path) const;

private:
    std::string buf_;
    std::size_t count_ = 0;
};

// CSV with a header row, comma separator and LF endings.
class CsvWriter {
public:
    explicit CsvWriter(const std::vector<std::string>& header);
    void row(const std::vector<std::string>& fields);
    void comment(const std::string& text);

    const std::string& text() const { return buf_; }
    void save(const std::string& path) const;

private:
    std::string buf_;
};

// Quad mesh over the sample grid: one vertex per present sample, one quad
// per cell whose four corners are all present (faces never span excluded or
// invalid samples).
struct GridMesh {
    std::vector<std::optional<std::size_t>> vertexIndex;  // grid index -> obj index
    std::size_t emitted = 0;
};

GridMesh emitGridMesh(ObjWriter& w, const GridSpec& grid,
                      const std::vector<std::optional<Vec3>>& samples);

void writeFile(const std::string& path, const std::string& content);

}  // namespace envtool
