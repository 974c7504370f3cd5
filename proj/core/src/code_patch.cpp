#include "mtqc/code_patch.hpp"

#include <algorithm>

#include "mtqc/error.hpp"

namespace mtqc {
namespace {

void require_populated(const Layout& layout, GridSize block, JunctionCoord origin) {
    for (int r = 0; r < block.rows; ++r) {
        for (int c = 0; c < block.cols; ++c) {
            if (!layout.populated(0, origin.row + r, origin.col + c)) {
                throw ConfigError("patch", "junction block extends past the populated layout");
            }
        }
    }
}

}  // namespace

int Stabilizer::weight() const {
    return static_cast<int>(std::count_if(data.begin(), data.end(), [](int q) { return q >= 0; }));
}

int CodePatch::data_at(JunctionCoord j) const {
    const int r = j.row - origin_.row;
    const int c = j.col - origin_.col;
    if (r < 0 || c < 0 || r >= block_.rows || c >= block_.cols) return -1;
    return data_grid_[static_cast<std::size_t>(r * block_.cols + c)];
}

int CodePatch::stabilizer_at(JunctionCoord j) const {
    const int r = j.row - origin_.row;
    const int c = j.col - origin_.col;
    if (r < 0 || c < 0 || r >= block_.rows || c >= block_.cols) return -1;
    return stab_grid_[static_cast<std::size_t>(r * block_.cols + c)];
}

void CodePatch::index_checks() {
    checks_of_.assign(data_.size(), {});
    for (int s = 0; s < stabilizer_count(); ++s) {
        for (int q : stabs_[static_cast<std::size_t>(s)].data) {
            if (q >= 0) checks_of_[static_cast<std::size_t>(q)].push_back(s);
        }
    }
}

CodePatch CodePatch::rotated(const Layout& layout, int distance, JunctionCoord origin) {
    if (distance < 2) throw ConfigError("distance", "must be >= 2");
    const GridSize block{distance + 1, distance + 1};
    require_populated(layout, block, origin);

    CodePatch p;
    p.distance_ = distance;
    p.block_ = block;
    p.origin_ = origin;
    p.data_grid_.assign(static_cast<std::size_t>(block.area()), -1);
    p.stab_grid_.assign(static_cast<std::size_t>(block.area()), -1);

    for (int r = 0; r < distance; ++r) {
        for (int c = 0; c < distance; ++c) {
            p.data_grid_[static_cast<std::size_t>(r * block.cols + c)] = static_cast<int>(p.data_.size());
            p.data_.push_back({origin.row + r, origin.col + c});
        }
    }
    auto data_local = [&](int r, int c) {
        if (r < 0 || c < 0 || r >= distance || c >= distance) return -1;
        return p.data_grid_[static_cast<std::size_t>(r * block.cols + c)];
    };

    for (int i = 0; i <= distance; ++i) {
        for (int j = 0; j <= distance; ++j) {
            const CheckType type = ((i + j) % 2 == 0) ? CheckType::X : CheckType::Z;
            const bool top_bottom = (i == 0 || i == distance);
            const bool left_right = (j == 0 || j == distance);
            if (top_bottom && left_right) continue;
            if (top_bottom && type != CheckType::X) continue;
            if (left_right && type != CheckType::Z) continue;
            Stabilizer s;
            s.type = type;
            s.junction = {origin.row + i, origin.col + j};
            s.data = {data_local(i - 1, j - 1), data_local(i - 1, j), data_local(i, j - 1),
                      data_local(i, j)};
            p.stab_grid_[static_cast<std::size_t>(i * block.cols + j)] = static_cast<int>(p.stabs_.size());
            p.stabs_.push_back(s);
        }
    }
    for (int c = 0; c < distance; ++c) p.logical_z_.push_back(data_local(0, c));
    for (int r = 0; r < distance; ++r) p.logical_x_.push_back(data_local(r, 0));
    p.index_checks();
    return p;
}

CodePatch CodePatch::region(const Layout& layout, GridSize block, JunctionCoord origin) {
    if (block.rows < 1 || block.cols < 1) throw ConfigError("block", "must be at least 1x1");
    require_populated(layout, block, origin);

    CodePatch p;
    p.distance_ = 0;
    p.block_ = block;
    p.origin_ = origin;
    p.data_grid_.assign(static_cast<std::size_t>(block.area()), -1);
    p.stab_grid_.assign(static_cast<std::size_t>(block.area()), -1);
    for (int r = 0; r < block.rows; ++r) {
        for (int c = 0; c < block.cols; ++c) {
            p.data_grid_[static_cast<std::size_t>(r * block.cols + c)] = static_cast<int>(p.data_.size());
            p.data_.push_back({origin.row + r, origin.col + c});
        }
    }
    auto data_local = [&](int r, int c) {
        if (r < 0 || c < 0 || r >= block.rows || c >= block.cols) return -1;
        return p.data_grid_[static_cast<std::size_t>(r * block.cols + c)];
    };
    for (int i = 0; i < block.rows; ++i) {
        for (int j = 0; j < block.cols; ++j) {
            Stabilizer s;
            s.type = ((i + j) % 2 == 0) ? CheckType::X : CheckType::Z;
            s.junction = {origin.row + i, origin.col + j};
            s.data = {data_local(i - 1, j - 1), data_local(i - 1, j), data_local(i, j - 1),
                      data_local(i, j)};
            p.stab_grid_[static_cast<std::size_t>(i * block.cols + j)] = static_cast<int>(p.stabs_.size());
            p.stabs_.push_back(s);
        }
    }
    p.index_checks();
    return p;
}

}  // namespace mtqc
