#include "mtqc/field.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "mtqc/error.hpp"

namespace mtqc {
namespace {

constexpr double kInv4Pi = 1.0 / (4.0 * std::numbers::pi);
constexpr double kElementaryCharge = 1.602176634e-19;

/// ln(v + R) without cancellation for negative v.
double log_v_plus_r(double v, double r, double perp2) {
    if (v >= 0.0) return std::log(v + r);
    if (perp2 <= 0.0) return 0.0;  // only reached where the caller multiplies by zero
    return std::log(perp2 / (r - v));
}

/// Antiderivative of 1/R over the panel plane, R = sqrt(u^2 + v^2 + z^2).
double corner_potential(double u, double v, double z) {
    const double r = std::sqrt(u * u + v * v + z * z);
    double f = 0.0;
    if (u != 0.0) f += u * log_v_plus_r(v, r, u * u + z * z);
    if (v != 0.0) f += v * log_v_plus_r(u, r, v * v + z * z);
    if (z != 0.0 && r > 0.0) f -= z * std::atan(u * v / (z * r));
    return f;
}

struct CornerField {
    double ex, ey, ez;
};

CornerField corner_field(double u, double v, double z) {
    const double r = std::sqrt(u * u + v * v + z * z);
    CornerField c{};
    c.ex = log_v_plus_r(v, r, u * u + z * z);
    c.ey = log_v_plus_r(u, r, v * v + z * z);
    c.ez = (z != 0.0 && r > 0.0) ? std::atan(u * v / (z * r)) : 0.0;
    return c;
}

double panel_potential(const Panel& p, const Vec3& x) {
    const double u1 = p.x0 - x[0], u2 = p.x1 - x[0];
    const double v1 = p.y0 - x[1], v2 = p.y1 - x[1];
    const double z = x[2] - p.z;
    return kInv4Pi * (corner_potential(u2, v2, z) - corner_potential(u1, v2, z) - corner_potential(u2, v1, z) +
                      corner_potential(u1, v1, z));
}

Vec3 panel_field(const Panel& p, const Vec3& x) {
    const double u1 = p.x0 - x[0], u2 = p.x1 - x[0];
    const double v1 = p.y0 - x[1], v2 = p.y1 - x[1];
    const double z = x[2] - p.z;
    const auto a = corner_field(u2, v2, z);
    const auto b = corner_field(u1, v2, z);
    const auto c = corner_field(u2, v1, z);
    const auto d = corner_field(u1, v1, z);
    return {kInv4Pi * (a.ex - b.ex - c.ex + d.ex), kInv4Pi * (a.ey - b.ey - c.ey + d.ey),
            kInv4Pi * (a.ez - b.ez - c.ez + d.ez)};
}

Vec3 centroid(const Panel& p) { return {0.5 * (p.x0 + p.x1), 0.5 * (p.y0 + p.y1), p.z}; }

double norm2(const Vec3& e) { return e[0] * e[0] + e[1] * e[1] + e[2] * e[2]; }

}  // namespace

void DriveParams::validate() const {
    if (!(omega > 0.0)) throw ConfigError("drive.omega", "must be > 0");
    if (!(mass_kg > 0.0)) throw ConfigError("drive.mass", "must be > 0");
    if (!(charge_C > 0.0)) throw ConfigError("drive.charge", "must be > 0");
    if (!(v_rf >= 0.0)) throw ConfigError("drive.v_rf", "must be >= 0");
}

BemSolution solve_charges(const TrapGeometry& g, const MeshOptions& mesh, Excitation ex) {
    g.validate();
    BemSolution s;
    s.panels = mesh_geometry(g, mesh);
    const auto n = static_cast<Eigen::Index>(s.panels.size());
    Eigen::MatrixXd a(n, n);
    Eigen::VectorXd rhs(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const Panel& pi = s.panels[static_cast<std::size_t>(i)];
        const Vec3 c = centroid(pi);
        for (Eigen::Index j = 0; j < n; ++j) a(i, j) = panel_potential(s.panels[static_cast<std::size_t>(j)], c);
        const auto& patch = g.patches[static_cast<std::size_t>(pi.patch)];
        const bool driven = ex == Excitation::RF ? patch.role == PatchRole::RF : patch.role == PatchRole::Static;
        rhs(i) = driven ? patch.potential : 0.0;
    }
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
    s.rcond = lu.rcond();
    const Eigen::VectorXd q = lu.solve(rhs);
    s.residual = (a * q - rhs).cwiseAbs().maxCoeff();
    if (!std::isfinite(s.rcond) || s.rcond < 1e-13 || !q.allFinite()) {
        const double cond = s.rcond > 0.0 ? 1.0 / s.rcond : std::numeric_limits<double>::infinity();
        std::ostringstream os;
        os << "boundary-element system is ill-conditioned (condition estimate " << cond << ")";
        throw SolverError(cond, os.str());
    }
    s.charge.assign(q.data(), q.data() + n);
    return s;
}

double potential_at(const BemSolution& s, const Vec3& p) {
    double v = 0.0;
    for (std::size_t j = 0; j < s.panels.size(); ++j) v += s.charge[j] * panel_potential(s.panels[j], p);
    return v;
}

Vec3 field_at(const BemSolution& s, const Vec3& p) {
    Vec3 e{0.0, 0.0, 0.0};
    for (std::size_t j = 0; j < s.panels.size(); ++j) {
        const Vec3 f = panel_field(s.panels[j], p);
        for (int k = 0; k < 3; ++k) e[static_cast<std::size_t>(k)] += s.charge[j] * f[static_cast<std::size_t>(k)];
    }
    return e;
}

double pseudopotential_from_field(const Vec3& e, const DriveParams& d) {
    const double joules = d.charge_C * d.charge_C * d.v_rf * d.v_rf * norm2(e) / (4.0 * d.mass_kg * d.omega * d.omega);
    return joules / kElementaryCharge * 1e3;
}

double pseudopotential(const Vec3& point, const BemSolution& s, const DriveParams& drive) {
    return pseudopotential_from_field(field_at(s, point), drive);
}

PseudoPotentialMap sample_map(const BemSolution& s, const DriveParams& drive, Vec3 lo, Vec3 hi,
                              std::array<int, 3> count) {
    PseudoPotentialMap m;
    m.origin = lo;
    m.count = count;
    for (int k = 0; k < 3; ++k) {
        const auto kk = static_cast<std::size_t>(k);
        if (count[kk] < 1) throw ConfigError("map.count", "must be >= 1 per axis");
        m.spacing[kk] = count[kk] > 1 ? (hi[kk] - lo[kk]) / (count[kk] - 1) : 0.0;
    }
    m.values.resize(static_cast<std::size_t>(count[0]) * static_cast<std::size_t>(count[1]) *
                    static_cast<std::size_t>(count[2]));
    std::size_t idx = 0;
    for (int iy = 0; iy < count[1]; ++iy) {
        for (int iz = 0; iz < count[2]; ++iz) {
            for (int ix = 0; ix < count[0]; ++ix) {
                const Vec3 p{lo[0] + ix * m.spacing[0], lo[1] + iy * m.spacing[1], lo[2] + iz * m.spacing[2]};
                m.values[idx++] = pseudopotential(p, s, drive);
            }
        }
    }
    return m;
}

std::vector<NilPoint> find_rf_nil(const PseudoPotentialMap& map, double max_jump) {
    std::vector<NilPoint> out;
    const int nx = map.count[0], ny = map.count[1], nz = map.count[2];
    auto parabola = [](double fm, double f0, double fp) {
        const double den = fm - 2.0 * f0 + fp;
        return den > 0.0 ? std::clamp(0.5 * (fm - fp) / den, -0.5, 0.5) : 0.0;
    };
    for (int iy = 0; iy < ny; ++iy) {
        const double y = map.origin[1] + iy * map.spacing[1];
        int bx = 0, bz = 0;
        double best = std::numeric_limits<double>::infinity();
        for (int iz = 0; iz < nz; ++iz) {
            for (int ix = 0; ix < nx; ++ix) {
                const double v = map.at(ix, iy, iz);
                if (v < best) {
                    best = v;
                    bx = ix;
                    bz = iz;
                }
            }
        }
        if (bx == 0 || bx == nx - 1 || bz == 0 || bz == nz - 1) {
            throw NilLostError(y, "no interior pseudopotential minimum in the slice at y = " + std::to_string(y * 1e6) + " um");
        }
        const double ox = parabola(map.at(bx - 1, iy, bz), best, map.at(bx + 1, iy, bz));
        const double oz = parabola(map.at(bx, iy, bz - 1), best, map.at(bx, iy, bz + 1));
        NilPoint p{y, map.origin[0] + (bx + ox) * map.spacing[0], map.origin[2] + (bz + oz) * map.spacing[2], best};
        if (!out.empty()) {
            const auto& prev = out.back();
            if (std::abs(p.transverse - prev.transverse) > max_jump || std::abs(p.height - prev.height) > max_jump) {
                throw NilLostError(y, "nil curve is discontinuous at y = " + std::to_string(y * 1e6) + " um");
            }
        }
        out.push_back(p);
    }
    return out;
}

std::vector<NilPoint> track_nil(const BemSolution& s, const DriveParams& drive, double y_begin, double y_end,
                                int slices, double x_guess, double z_guess) {
    if (slices < 2) throw ConfigError("nil.slices", "must be >= 2");
    std::vector<NilPoint> out;
    double x = x_guess, z = z_guess;
    const double h = 1e-7;
    for (int k = 0; k < slices; ++k) {
        const double y = y_begin + (y_end - y_begin) * k / (slices - 1);
        bool converged = false;
        for (int it = 0; it < 40; ++it) {
            const Vec3 e = field_at(s, {x, y, z});
            const Vec3 exp = field_at(s, {x + h, y, z}), exm = field_at(s, {x - h, y, z});
            const Vec3 ezp = field_at(s, {x, y, z + h}), ezm = field_at(s, {x, y, z - h});
            double jtj[2][2] = {{0, 0}, {0, 0}};
            double jte[2] = {0, 0};
            for (std::size_t c = 0; c < 3; ++c) {
                const double jx = (exp[c] - exm[c]) / (2 * h);
                const double jz = (ezp[c] - ezm[c]) / (2 * h);
                jtj[0][0] += jx * jx;
                jtj[0][1] += jx * jz;
                jtj[1][1] += jz * jz;
                jte[0] += jx * e[c];
                jte[1] += jz * e[c];
            }
            const double det = jtj[0][0] * jtj[1][1] - jtj[0][1] * jtj[0][1];
            if (!(det > 0.0)) break;
            double dx = -(jtj[1][1] * jte[0] - jtj[0][1] * jte[1]) / det;
            double dz = -(jtj[0][0] * jte[1] - jtj[0][1] * jte[0]) / det;
            // Keep steps local; a far jump means the slice has lost its nil.
            const double cap = 0.25 * z;
            const double len = std::hypot(dx, dz);
            if (len > cap) {
                dx *= cap / len;
                dz *= cap / len;
            }
            x += dx;
            z += dz;
            if (!(z > 0.0) || std::abs(x - x_guess) > 10.0 * z_guess || z > 10.0 * z_guess) break;
            if (std::hypot(dx, dz) < 1e-11) {
                converged = true;
                break;
            }
        }
        if (!converged) {
            throw NilLostError(y, "nil tracking failed at y = " + std::to_string(y * 1e6) + " um");
        }
        out.push_back({y, x, z, pseudopotential({x, y, z}, s, drive)});
    }
    return out;
}

double trap_depth(const BemSolution& s, const DriveParams& drive, const NilPoint& nil, double z_max_factor) {
    auto phi = [&](double z) { return pseudopotential({nil.transverse, nil.axial, z}, s, drive); };
    const double lo = nil.height;
    const double hi = nil.height * z_max_factor;
    const int n = 48;
    int best = 0;
    double best_v = -1.0;
    for (int i = 0; i <= n; ++i) {
        const double v = phi(lo + (hi - lo) * i / n);
        if (v > best_v) {
            best_v = v;
            best = i;
        }
    }
    double a = lo + (hi - lo) * std::max(0, best - 1) / n;
    double b = lo + (hi - lo) * std::min(n, best + 1) / n;
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = phi(c), fd = phi(d);
    for (int it = 0; it < 40; ++it) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = phi(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = phi(d);
        }
    }
    return std::max({best_v, fc, fd}) - nil.phi_meV;
}

BarrierResult barrier(const TrapGeometry& g, const DriveParams& drive, const BarrierOptions& opt) {
    drive.validate();
    const BemSolution s = solve_charges(g, opt.mesh);
    DriveParams unit = drive;
    unit.v_rf = 1.0;
    auto profile = track_nil(s, unit, opt.y_begin, opt.y_end, opt.slices, g.focus_x, opt.z_guess);
    const double ref_depth = trap_depth(s, unit, profile.front());
    if (!(ref_depth > 0.0)) throw NilLostError(opt.y_begin, "no confinement at the reference slice");
    for (std::size_t k = 0; k < profile.size(); k += 4) {
        if (trap_depth(s, unit, profile[k]) < opt.min_depth_fraction * ref_depth) {
            throw NilLostError(profile[k].axial, "confinement collapses at y = " +
                                                     std::to_string(profile[k].axial * 1e6) + " um");
        }
    }
    BarrierResult r;
    r.panels = static_cast<int>(s.panels.size());
    r.v_rf = drive_for_depth(opt.target_depth_meV, ref_depth, unit);
    const double scale = r.v_rf * r.v_rf;
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (auto& p : profile) {
        p.phi_meV *= scale;
        lo = std::min(lo, p.phi_meV);
        hi = std::max(hi, p.phi_meV);
    }
    r.barrier_meV = hi - lo;
    r.depth_meV = ref_depth * scale;
    r.profile = std::move(profile);
    return r;
}

AnalyticTrap analytic_oracle(double a, double b, const DriveParams& drive) {
    if (!(a > 0.0) || !(b > 0.0)) throw ConfigError("five_wire.widths", "must be > 0");
    const double x1 = 0.5 * b, x2 = 0.5 * b + a;
    auto ez = [&](double z) {
        return (2.0 / std::numbers::pi) * (x2 / (z * z + x2 * x2) - x1 / (z * z + x1 * x1));
    };
    auto phi = [&](double z) { return pseudopotential_from_field({0.0, 0.0, ez(z)}, drive); };
    AnalyticTrap t;
    t.nil_height = std::sqrt(x1 * x2);
    const double lo = t.nil_height, hi = 20.0 * t.nil_height;
    double best_z = lo, best = 0.0;
    for (int i = 0; i <= 400; ++i) {
        const double z = lo + (hi - lo) * i / 400.0;
        const double v = phi(z);
        if (v > best) {
            best = v;
            best_z = z;
        }
    }
    double l = std::max(lo, best_z - (hi - lo) / 400.0), r = std::min(hi, best_z + (hi - lo) / 400.0);
    for (int it = 0; it < 100; ++it) {
        const double m1 = l + (r - l) / 3.0, m2 = r - (r - l) / 3.0;
        if (phi(m1) < phi(m2)) l = m1;
        else r = m2;
    }
    t.escape_height = 0.5 * (l + r);
    t.depth_meV = std::max(best, phi(t.escape_height));
    return t;
}

double drive_for_depth(double depth_meV, double depth_at_drive, const DriveParams& drive) {
    if (!(depth_meV > 0.0) || !(depth_at_drive > 0.0)) throw ConfigError("drive.depth", "must be > 0");
    // Depth is quadratic in the RF amplitude, so the root is closed-form.
    return drive.v_rf * std::sqrt(depth_meV / depth_at_drive);
}

}  // namespace mtqc
