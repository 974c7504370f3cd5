#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "mtqc/lattice.hpp"

namespace mtqc {

enum class CheckType : std::uint8_t { X, Z };

/// Position of a data qubit relative to the measure qubit that checks it.
/// The measure ion of junction (r, c) checks the data ions of junctions
/// (r-1, c-1), (r-1, c), (r, c-1) and (r, c).
enum class Corner : std::uint8_t { NW = 0, NE = 1, SW = 2, SE = 3 };

struct JunctionCoord {
    int row = 0;
    int col = 0;
    friend bool operator==(JunctionCoord, JunctionCoord) = default;
};

struct Stabilizer {
    CheckType type = CheckType::Z;
    JunctionCoord junction;          // hosts the measure ion
    std::array<int, 4> data{-1, -1, -1, -1};  // data index per Corner, -1 if absent

    [[nodiscard]] int weight() const;
};

/// Surface-code patch laid onto a rectangular block of junctions of one
/// module. Every junction holds a static data ion in its gate zone and a
/// measure ion parked in its readout zone.
class CodePatch {
public:
    /// Rotated distance-d patch on a (d+1)x(d+1) junction block. Data ions of
    /// the last row and column stay unused; weight-2 boundary checks are X on
    /// the top/bottom edges and Z on the left/right edges.
    static CodePatch rotated(const Layout& layout, int distance, JunctionCoord origin = {});

    /// Every junction of the block contributes one data ion and one measure
    /// ion checking whichever of its four corners exist. Check type follows
    /// the (row + col) checkerboard. Used for sub-code-sized lattices.
    static CodePatch region(const Layout& layout, GridSize block, JunctionCoord origin = {});

    [[nodiscard]] int distance() const { return distance_; }
    [[nodiscard]] int data_count() const { return static_cast<int>(data_.size()); }
    [[nodiscard]] int stabilizer_count() const { return static_cast<int>(stabs_.size()); }
    [[nodiscard]] int qubit_count() const { return data_count() + stabilizer_count(); }
    [[nodiscard]] int measure_qubit(int stabilizer) const { return data_count() + stabilizer; }

    [[nodiscard]] const std::vector<JunctionCoord>& data_sites() const { return data_; }
    [[nodiscard]] const std::vector<Stabilizer>& stabilizers() const { return stabs_; }
    [[nodiscard]] const Stabilizer& stabilizer(int s) const { return stabs_.at(static_cast<std::size_t>(s)); }

    /// Stabilizers containing data qubit `q`.
    [[nodiscard]] const std::vector<int>& checks_of(int q) const { return checks_of_.at(static_cast<std::size_t>(q)); }

    /// Supports of the logical operators. Z_L runs along the top data row,
    /// X_L down the left data column (empty for `region` patches).
    [[nodiscard]] const std::vector<int>& logical_z() const { return logical_z_; }
    [[nodiscard]] const std::vector<int>& logical_x() const { return logical_x_; }

    [[nodiscard]] int data_at(JunctionCoord j) const;
    [[nodiscard]] int stabilizer_at(JunctionCoord j) const;
    [[nodiscard]] GridSize block() const { return block_; }
    [[nodiscard]] JunctionCoord origin() const { return origin_; }

private:
    void index_checks();

    int distance_ = 0;
    GridSize block_;
    JunctionCoord origin_;
    std::vector<JunctionCoord> data_;
    std::vector<Stabilizer> stabs_;
    std::vector<std::vector<int>> checks_of_;
    std::vector<int> logical_z_;
    std::vector<int> logical_x_;
    std::vector<int> data_grid_;   // block-local -> data index or -1
    std::vector<int> stab_grid_;   // block-local -> stabilizer index or -1
};

}  // namespace mtqc
