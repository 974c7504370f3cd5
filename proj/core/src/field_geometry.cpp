#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include "mtqc/error.hpp"
#include "mtqc/field.hpp"

namespace mtqc {

const char* to_string(PatchRole r) {
    switch (r) {
        case PatchRole::RF: return "rf";
        case PatchRole::Static: return "static";
        case PatchRole::Ground: return "ground";
    }
    return "?";
}

PatchRole parse_patch_role(const std::string& s) {
    if (s == "rf") return PatchRole::RF;
    if (s == "static") return PatchRole::Static;
    if (s == "ground") return PatchRole::Ground;
    throw ConfigError("patch.role", "unknown role '" + s + "'");
}

void TrapGeometry::validate() const {
    if (patches.empty()) throw ConfigError("geometry.patches", "at least one electrode is required");
    for (std::size_t i = 0; i < patches.size(); ++i) {
        const auto& p = patches[i];
        if (!(p.width > 0.0) || !(p.length > 0.0)) {
            throw ConfigError("geometry.patches[" + std::to_string(i) + "]", "width and length must be > 0");
        }
    }
    // Coplanar patches may touch but not overlap.
    const double tol = 1e-12;
    for (std::size_t i = 0; i < patches.size(); ++i) {
        for (std::size_t j = i + 1; j < patches.size(); ++j) {
            const auto& a = patches[i];
            const auto& b = patches[j];
            if (std::abs(a.z0 - b.z0) > tol) continue;
            const double ox = std::min(a.x1(), b.x1()) - std::max(a.x0, b.x0);
            const double oy = std::min(a.y1(), b.y1()) - std::max(a.y0, b.y0);
            if (ox > tol && oy > tol) {
                throw ConfigError("geometry.patches[" + std::to_string(j) + "]",
                                  "overlaps patch " + std::to_string(i));
            }
        }
    }
    if (inter_module_gap < 0.0) throw ConfigError("geometry.gap", "must be >= 0");
}

TrapGeometry read_geometry(std::istream& in) {
    TrapGeometry g;
    std::string line;
    int lineno = 0;
    constexpr double um = 1e-6;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        std::istringstream ls(line);
        std::string key;
        if (!(ls >> key)) continue;
        const std::string where = "geometry line " + std::to_string(lineno);
        if (key == "patch") {
            std::string role;
            ElectrodePatch p;
            if (!(ls >> role >> p.x0 >> p.y0 >> p.z0 >> p.width >> p.length >> p.potential)) {
                throw ConfigError(where, "expected: patch <role> x0 y0 z0 w l potential");
            }
            auto& o = p.mesh_offset;
            if (ls >> o[0]) {
                if (!(ls >> o[1] >> o[2])) throw ConfigError(where, "mesh offset needs three values");
                for (auto& v : o) v *= um;
            }
            p.role = parse_patch_role(role);
            p.x0 *= um;
            p.y0 *= um;
            p.z0 *= um;
            p.width *= um;
            p.length *= um;
            g.patches.push_back(p);
        } else if (key == "gap") {
            if (!(ls >> g.inter_module_gap)) throw ConfigError(where, "expected: gap <um>");
            g.inter_module_gap *= um;
        } else if (key == "misalignment") {
            auto& m = g.misalignment;
            if (!(ls >> m[0] >> m[1] >> m[2])) throw ConfigError(where, "expected: misalignment dx dy dz");
            for (auto& v : m) v *= um;
        } else if (key == "focus") {
            if (!(ls >> g.focus_x >> g.focus_y)) throw ConfigError(where, "expected: focus x y");
            g.focus_x *= um;
            g.focus_y *= um;
        } else {
            throw ConfigError(where, "unknown keyword '" + key + "'");
        }
    }
    g.validate();
    return g;
}

TrapGeometry read_geometry_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("geometry", "cannot open " + path);
    return read_geometry(in);
}

void write_geometry(std::ostream& out, const TrapGeometry& g) {
    constexpr double um = 1e6;
    out << std::setprecision(10);
    out << "gap " << g.inter_module_gap * um << '\n';
    out << "misalignment " << g.misalignment[0] * um << ' ' << g.misalignment[1] * um << ' ' << g.misalignment[2] * um
        << '\n';
    out << "focus " << g.focus_x * um << ' ' << g.focus_y * um << '\n';
    for (const auto& p : g.patches) {
        out << "patch " << to_string(p.role) << ' ' << p.x0 * um << ' ' << p.y0 * um << ' ' << p.z0 * um << ' '
            << p.width * um << ' ' << p.length * um << ' ' << p.potential;
        const auto& o = p.mesh_offset;
        if (o[0] != 0.0 || o[1] != 0.0 || o[2] != 0.0) out << ' ' << o[0] * um << ' ' << o[1] * um << ' ' << o[2] * um;
        out << '\n';
    }
}

namespace {

ElectrodePatch rect(double x0, double x1, double y0, double y1, PatchRole role) {
    return {x0, y0, 0.0, x1 - x0, y1 - y0, role, role == PatchRole::RF ? 1.0 : 0.0};
}

void check_widths(double a, double b, double outer) {
    if (!(a > 0.0)) throw ConfigError("rail_width", "must be > 0");
    if (!(b > 0.0)) throw ConfigError("center_width", "must be > 0");
    if (!(outer > 0.0)) throw ConfigError("outer_width", "must be > 0");
}

void add_strips(TrapGeometry& g, double a, double b, double y0, double y1, double outer, bool rf) {
    const double h = 0.5 * b;
    const auto rail = rf ? PatchRole::RF : PatchRole::Ground;
    g.patches.push_back(rect(-h - a - outer, -h - a, y0, y1, PatchRole::Ground));
    g.patches.push_back(rect(-h - a, -h, y0, y1, rail));
    g.patches.push_back(rect(-h, h, y0, y1, PatchRole::Ground));
    g.patches.push_back(rect(h, h + a, y0, y1, rail));
    g.patches.push_back(rect(h + a, h + a + outer, y0, y1, PatchRole::Ground));
}

/// Breakpoints of [lo, hi] with panel size growing away from `focus`.
std::vector<double> graded(double lo, double hi, double focus, double hmin, double hmax, double grading) {
    auto size = [&](double s) { return std::min(hmax, hmin + grading * std::abs(s - focus)); };
    auto walk = [&](double from, double to) {
        std::vector<double> pts{from};
        const double dir = to > from ? 1.0 : -1.0;
        double s = from;
        while (dir * (to - s) > 1e-15) {
            const double h = size(s);
            double next = s + dir * h;
            if (dir * (to - next) < 0.3 * h) next = to;
            pts.push_back(next);
            s = next;
        }
        return pts;
    };
    std::vector<double> out;
    if (focus > lo && focus < hi) {
        auto left = walk(focus, lo);
        auto right = walk(focus, hi);
        out.assign(left.rbegin(), left.rend());
        out.insert(out.end(), right.begin() + 1, right.end());
    } else if (focus <= lo) {
        out = walk(lo, hi);
    } else {
        out = walk(hi, lo);
        std::reverse(out.begin(), out.end());
    }
    return out;
}

}  // namespace

TrapGeometry five_wire(double a, double b, double y_begin, double y_end, double outer) {
    check_widths(a, b, outer);
    if (!(y_end > y_begin)) throw ConfigError("five_wire.length", "y_end must exceed y_begin");
    TrapGeometry g;
    add_strips(g, a, b, y_begin, y_end, outer, true);
    g.focus_y = std::clamp(0.0, y_begin, y_end);
    return g;
}

TrapGeometry module_boundary(double a, double b, double half_length, double gap, Vec3 mis, double outer) {
    check_widths(a, b, outer);
    if (!(half_length > 0.5 * gap)) throw ConfigError("boundary.half_length", "must exceed half the gap");
    if (gap < 0.0) throw ConfigError("boundary.gap", "must be >= 0");
    TrapGeometry g;
    add_strips(g, a, b, -half_length, -0.5 * gap, outer, true);
    const std::size_t first = g.patches.size();
    add_strips(g, a, b, 0.5 * gap, half_length, outer, true);
    for (std::size_t i = first; i < g.patches.size(); ++i) {
        g.patches[i].x0 += mis[0];
        g.patches[i].y0 += mis[1];
        g.patches[i].z0 += mis[2];
        g.patches[i].mesh_offset = mis;
    }
    g.inter_module_gap = gap;
    g.misalignment = mis;
    return g;
}

TrapGeometry x_junction(double a, double b, double arm, double taper, double outer) {
    check_widths(a, b, outer);
    const double h = 0.5 * b;
    if (!(arm > h + a + outer)) throw ConfigError("junction.arm_length", "too short for the rail layout");
    if (taper < 0.0 || taper >= a) throw ConfigError("junction.taper", "must lie in [0, rail_width)");
    TrapGeometry g;
    g.patches.push_back(rect(-h, h, -arm, arm, PatchRole::Ground));
    g.patches.push_back(rect(-arm, -h, -h, h, PatchRole::Ground));
    g.patches.push_back(rect(h, arm, -h, h, PatchRole::Ground));
    for (const double sx : {-1.0, 1.0}) {
        for (const double sy : {-1.0, 1.0}) {
            auto q = [&](double x0, double x1, double y0, double y1, PatchRole r) {
                const double ax = sx * x0, bx = sx * x1, ay = sy * y0, by = sy * y1;
                g.patches.push_back(rect(std::min(ax, bx), std::max(ax, bx), std::min(ay, by), std::max(ay, by), r));
            };
            // Rail along the arm, then along the crossing arm, minus the corner square.
            q(h, h + a, h + taper, arm, PatchRole::RF);
            q(h + a, arm, h, h + a, PatchRole::RF);
            if (taper > 0.0) {
                q(h + taper, h + a, h, h + taper, PatchRole::RF);
                q(h, h + taper, h, h + taper, PatchRole::Ground);
            }
            q(h + a, arm, h + a, arm, PatchRole::Ground);
        }
    }
    return g;
}

TrapGeometry interrupted_rails(double a, double b, double half_length, double interruption, double outer) {
    check_widths(a, b, outer);
    if (!(interruption > 0.0) || !(half_length > 0.5 * interruption)) {
        throw ConfigError("interruption", "must be > 0 and shorter than the trap");
    }
    TrapGeometry g;
    const double c = 0.5 * interruption;
    add_strips(g, a, b, -half_length, -c, outer, true);
    add_strips(g, a, b, -c, c, outer, false);
    add_strips(g, a, b, c, half_length, outer, true);
    return g;
}

std::vector<Panel> mesh_geometry(const TrapGeometry& g, const MeshOptions& m) {
    if (!(m.density > 0.0)) throw ConfigError("mesh.density", "must be > 0");
    if (!(m.min_panel > 0.0) || !(m.max_panel >= m.min_panel)) {
        throw ConfigError("mesh.panel_size", "need 0 < min_panel <= max_panel");
    }
    if (!(m.grading >= 0.0)) throw ConfigError("mesh.grading", "must be >= 0");
    const double hmin = m.min_panel / m.density, hmax = m.max_panel / m.density;
    std::vector<Panel> out;
    for (std::size_t i = 0; i < g.patches.size(); ++i) {
        const auto& p = g.patches[i];
        const auto& o = p.mesh_offset;
        auto xs = graded(p.x0 - o[0], p.x1() - o[0], g.focus_x, hmin, hmax, m.grading);
        auto ys = graded(p.y0 - o[1], p.y1() - o[1], g.focus_y, hmin, hmax, m.grading);
        for (auto& x : xs) x += o[0];
        for (auto& y : ys) y += o[1];
        for (std::size_t iy = 0; iy + 1 < ys.size(); ++iy) {
            for (std::size_t ix = 0; ix + 1 < xs.size(); ++ix) {
                out.push_back({xs[ix], xs[ix + 1], ys[iy], ys[iy + 1], p.z0, static_cast<int>(i)});
            }
        }
    }
    return out;
}

}  // namespace mtqc
