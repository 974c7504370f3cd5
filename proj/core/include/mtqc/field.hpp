#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace mtqc {

using Vec3 = std::array<double, 3>;  // x transverse, y axial (transport), z height; metres

enum class PatchRole : std::uint8_t { RF, Static, Ground };

const char* to_string(PatchRole r);
PatchRole parse_patch_role(const std::string& s);

/// Axis-aligned rectangular electrode lying in a plane of constant z.
struct ElectrodePatch {
    double x0 = 0.0;
    double y0 = 0.0;
    double z0 = 0.0;
    double width = 0.0;   // along x
    double length = 0.0;  // along y
    PatchRole role = PatchRole::Ground;
    double potential = 0.0;  // RF amplitude scale or DC value, volts
    /// The patch is meshed in a frame moved by this offset, so a rigidly
    /// shifted part keeps the panel layout it had before the shift.
    Vec3 mesh_offset{0.0, 0.0, 0.0};

    [[nodiscard]] double x1() const { return x0 + width; }
    [[nodiscard]] double y1() const { return y0 + length; }
};

struct TrapGeometry {
    std::vector<ElectrodePatch> patches;
    double inter_module_gap = 0.0;
    Vec3 misalignment{0.0, 0.0, 0.0};
    /// Where mesh refinement concentrates (trap axis and crossing point).
    double focus_x = 0.0;
    double focus_y = 0.0;

    /// Positive extents and no overlap between coplanar patches.
    void validate() const;
};

/// Plain-text geometry: `patch <rf|static|ground> x0 y0 z0 w l potential [ox oy oz]`
/// with lengths in micrometres (the optional triple is the mesh offset), plus
/// optional `gap`, `misalignment` and `focus` lines. `#` starts a comment.
TrapGeometry read_geometry(std::istream& in);
TrapGeometry read_geometry_file(const std::string& path);
void write_geometry(std::ostream& out, const TrapGeometry& g);

/// Symmetric five-wire surface trap along y: ground centre strip of width b,
/// RF rails of width a, outer grounds of width `outer`.
TrapGeometry five_wire(double rail_width, double center_width, double y_begin, double y_end,
                       double outer_width = 1e-3);

/// Two five-wire modules meeting at y = 0 with an empty gap; the second
/// module is rigidly shifted by `misalignment`.
TrapGeometry module_boundary(double rail_width, double center_width, double half_length, double gap,
                             Vec3 misalignment, double outer_width = 1e-3);

/// Crossing of two five-wire tracks at the origin. The RF electrode forms
/// four L-shaped quadrant pieces; a rounding square of side `taper` is cut
/// from each inner corner to soften the crossing.
TrapGeometry x_junction(double rail_width, double center_width, double arm_length, double taper = 0.0,
                        double outer_width = 1e-3);

/// Five-wire trap whose RF rails stop over |y| < interruption / 2.
TrapGeometry interrupted_rails(double rail_width, double center_width, double half_length, double interruption,
                               double outer_width = 1e-3);

struct MeshOptions {
    double min_panel = 10e-6;     // size at the focus
    double max_panel = 200e-6;
    double grading = 0.25;        // growth of panel size per metre of distance from the focus
    double density = 1.0;         // divides both sizes
};

struct Panel {
    double x0, x1, y0, y1, z;
    int patch;
};

enum class Excitation : std::uint8_t { RF, Static };

/// Piecewise-constant charge on each panel with collocation at centroids.
/// Charges are stored as sigma / epsilon_0 so potentials come out in volts.
struct BemSolution {
    std::vector<Panel> panels;
    std::vector<double> charge;
    double residual = 0.0;        // max |A q - V| at the collocation points
    double rcond = 0.0;           // reciprocal condition estimate
};

std::vector<Panel> mesh_geometry(const TrapGeometry& g, const MeshOptions& mesh = {});

/// Throws SolverError when the system is singular or badly conditioned.
BemSolution solve_charges(const TrapGeometry& g, const MeshOptions& mesh = {}, Excitation ex = Excitation::RF);

double potential_at(const BemSolution& s, const Vec3& p);
Vec3 field_at(const BemSolution& s, const Vec3& p);

struct DriveParams {
    double omega = 2.0 * 3.14159265358979323846 * 25e6;  // rad/s
    double mass_kg = 171.0 * 1.66053906660e-27;
    double charge_C = 1.602176634e-19;
    double v_rf = 100.0;  // amplitude, volts

    void validate() const;
};

/// Pseudopotential energy in meV for a field given per volt of RF amplitude.
double pseudopotential_from_field(const Vec3& e_per_volt, const DriveParams& drive);
double pseudopotential(const Vec3& point, const BemSolution& s, const DriveParams& drive);

/// Regular grid of pseudopotential values (meV), x fastest then z then y.
struct PseudoPotentialMap {
    Vec3 origin{};
    Vec3 spacing{};
    std::array<int, 3> count{};
    std::vector<double> values;

    [[nodiscard]] double at(int ix, int iy, int iz) const {
        return values[(static_cast<std::size_t>(iy) * static_cast<std::size_t>(count[2]) + static_cast<std::size_t>(iz)) *
                          static_cast<std::size_t>(count[0]) + static_cast<std::size_t>(ix)];
    }
};

PseudoPotentialMap sample_map(const BemSolution& s, const DriveParams& drive, Vec3 lo, Vec3 hi,
                              std::array<int, 3> count);

struct NilPoint {
    double axial = 0.0;
    double transverse = 0.0;
    double height = 0.0;
    double phi_meV = 0.0;
};

/// Per axial slice of the map: grid minimiser refined by a quadratic fit.
/// Throws NilLostError if a slice minimum sits on the box edge or the curve
/// jumps by more than `max_jump` between neighbouring slices.
std::vector<NilPoint> find_rf_nil(const PseudoPotentialMap& map, double max_jump = 50e-6);

/// Continuous nil tracking along y by least-squares minimisation of |E|
/// over (x, z) in each slice, seeded from the previous slice.
std::vector<NilPoint> track_nil(const BemSolution& s, const DriveParams& drive, double y_begin, double y_end,
                                int slices, double x_guess, double z_guess);

/// Depth above a nil point: maximum of the pseudopotential on the vertical
/// through it minus its value on the nil.
double trap_depth(const BemSolution& s, const DriveParams& drive, const NilPoint& nil, double z_max_factor = 6.0);

struct BarrierOptions {
    double y_begin = -300e-6;
    double y_end = 300e-6;
    int slices = 121;
    double target_depth_meV = 100.0;  // the drive is scaled to this depth at y_begin
    double z_guess = 100e-6;
    double min_depth_fraction = 0.05;  // weaker slices count as lost confinement
    MeshOptions mesh;
};

struct BarrierResult {
    double barrier_meV = 0.0;
    double depth_meV = 0.0;
    double v_rf = 0.0;
    std::vector<NilPoint> profile;
    int panels = 0;
};

BarrierResult barrier(const TrapGeometry& g, const DriveParams& drive, const BarrierOptions& opt = {});

struct AnalyticTrap {
    double nil_height = 0.0;
    double depth_meV = 0.0;
    double escape_height = 0.0;
};

/// Gapless-plane five-wire trap (infinite strips, ground elsewhere).
AnalyticTrap analytic_oracle(double rail_width, double center_width, const DriveParams& drive);

/// RF amplitude giving `depth_meV` for a depth of `depth_at_drive` at `drive.v_rf`.
double drive_for_depth(double depth_meV, double depth_at_drive, const DriveParams& drive);

}  // namespace mtqc
