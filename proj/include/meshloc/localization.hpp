#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <vector>

#include "meshloc/types.hpp"
#include "meshloc/uwb.hpp"

namespace meshloc {

struct InsufficientAnchors : std::runtime_error {
    InsufficientAnchors() : std::runtime_error("not enough localized reference points") {}
};

struct DegenerateGeometry : std::runtime_error {
    DegenerateGeometry() : std::runtime_error("reference geometry is collinear/coplanar") {}
};

enum class Frame { Global, Relative };

struct PositionEstimate {
    Position position;
    Frame frame = Frame::Relative;
    bool localized = false;
    int hop_depth = 0;       // inference steps from the seeds
    double residual = 0.0;   // RMS range residual at the solution, meters
};

enum class SolverMode { Planar2D, Full3D };

struct SolverConfig {
    int max_iters = 50;
    double step_tol = 1e-6;   // meters
    double damping0 = 1e-3;   // Levenberg lambda; x10 on reject, /10 on accept
    SolverMode mode = SolverMode::Planar2D;
};

namespace detail {

// Eigenvalues of a symmetric n x n (n <= 3), ascending. Used only to reject
// ill-conditioned normal equations, so the analytic forms suffice.
inline std::array<double, 3> sym_eigenvalues(const std::array<std::array<double, 3>, 3>& a,
                                             int n) {
    if (n == 2) {
        double tr = a[0][0] + a[1][1];
        double d = std::sqrt((a[0][0] - a[1][1]) * (a[0][0] - a[1][1]) + 4.0 * a[0][1] * a[0][1]);
        return {(tr - d) / 2.0, (tr + d) / 2.0, 0.0};
    }
    double p1 = a[0][1] * a[0][1] + a[0][2] * a[0][2] + a[1][2] * a[1][2];
    if (p1 == 0.0) {
        std::array<double, 3> e = {a[0][0], a[1][1], a[2][2]};
        std::sort(e.begin(), e.end());
        return e;
    }
    double q = (a[0][0] + a[1][1] + a[2][2]) / 3.0;
    double p2 = (a[0][0] - q) * (a[0][0] - q) + (a[1][1] - q) * (a[1][1] - q) +
                (a[2][2] - q) * (a[2][2] - q) + 2.0 * p1;
    double p = std::sqrt(p2 / 6.0);
    std::array<std::array<double, 3>, 3> b{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) b[i][j] = (a[i][j] - (i == j ? q : 0.0)) / p;
    double detb = b[0][0] * (b[1][1] * b[2][2] - b[1][2] * b[2][1]) -
                  b[0][1] * (b[1][0] * b[2][2] - b[1][2] * b[2][0]) +
                  b[0][2] * (b[1][0] * b[2][1] - b[1][1] * b[2][0]);
    double r = std::clamp(detb / 2.0, -1.0, 1.0);
    double phi = std::acos(r) / 3.0;
    double e1 = q + 2.0 * p * std::cos(phi);
    double e3 = q + 2.0 * p * std::cos(phi + 2.0 * std::numbers::pi / 3.0);
    double e2 = 3.0 * q - e1 - e3;
    std::array<double, 3> e = {e1, e2, e3};
    std::sort(e.begin(), e.end());
    return e;
}

inline double condition_number(const std::array<std::array<double, 3>, 3>& m, int n) {
    auto e = sym_eigenvalues(m, n);
    double lo = e[3 - n];  // smallest of the n used
    double hi = e[2];
    if (!(lo > 0.0)) return std::numeric_limits<double>::infinity();
    return hi / lo;
}

// Gaussian elimination with partial pivoting, n <= 3.
inline bool solve_linear(std::array<std::array<double, 3>, 3> m, std::array<double, 3> rhs,
                         int n, std::array<double, 3>& out) {
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
        if (m[piv][col] == 0.0) return false;
        std::swap(m[piv], m[col]);
        std::swap(rhs[piv], rhs[col]);
        for (int r = col + 1; r < n; ++r) {
            double f = m[r][col] / m[col][col];
            for (int c = col; c < n; ++c) m[r][c] -= f * m[col][c];
            rhs[r] -= f * rhs[col];
        }
    }
    for (int r = n - 1; r >= 0; --r) {
        double s = rhs[r];
        for (int c = r + 1; c < n; ++c) s -= m[r][c] * out[c];
        out[r] = s / m[r][r];
    }
    return true;
}

inline double planar_or_full_dist(const Vec3& x, const Vec3& a, SolverMode mode) {
    if (mode == SolverMode::Planar2D) return std::hypot(x.x - a.x, x.y - a.y);
    return distance(x, a);
}

}  // namespace detail

/// Reduce a slant range to the horizontal plane given the altitude difference
/// dz and its uncertainty. Ranges shorter than |dz| by more than 3 sigma are
/// inconsistent and discarded; within the band they clamp to 0.
inline std::optional<double> horizontal_projection(double d, double dz, double sigma) {
    double adz = std::abs(dz);
    if (d >= adz) return std::sqrt(d * d - dz * dz);
    if (d >= adz - 3.0 * sigma) return 0.0;
    return std::nullopt;
}

/// Jacobian row of the range residual ||x - a|| - d at x; unit vector toward
/// x from the reference point (z component zero in planar mode).
inline std::array<double, 3> range_jacobian_row(const Vec3& x, const Vec3& anchor,
                                                SolverMode mode) {
    double dist = detail::planar_or_full_dist(x, anchor, mode);
    if (mode == SolverMode::Planar2D)
        return {(x.x - anchor.x) / dist, (x.y - anchor.y) / dist, 0.0};
    return {(x.x - anchor.x) / dist, (x.y - anchor.y) / dist, (x.z - anchor.z) / dist};
}

/// Closed-form initializer: subtract the first range equation from the rest
/// and solve the resulting linear least-squares system by normal equations.
/// Planar2D solves (x, y) with z pinned to z_fixed.
inline Position trilaterate_linear(std::span<const Position> anchors,
                                   std::span<const double> ranges, SolverMode mode,
                                   double z_fixed = 0.0) {
    const int dim = mode == SolverMode::Planar2D ? 2 : 3;
    const std::size_t need = static_cast<std::size_t>(dim) + 1;
    if (anchors.size() < need || anchors.size() != ranges.size()) throw InsufficientAnchors{};

    auto coord = [&](const Position& p, int c) { return c == 0 ? p.x : (c == 1 ? p.y : p.z); };
    auto sq = [](double v) { return v * v; };
    auto norm2 = [&](const Position& p) {
        double s = sq(p.x) + sq(p.y);
        return dim == 3 ? s + sq(p.z) : s;
    };

    // Rows i>=1: 2*(a_i - a_0) . x = d_0^2 - d_i^2 + |a_i|^2 - |a_0|^2
    std::array<std::array<double, 3>, 3> mtm{};
    std::array<double, 3> mtb{};
    for (std::size_t i = 1; i < anchors.size(); ++i) {
        std::array<double, 3> row{};
        for (int c = 0; c < dim; ++c) row[c] = 2.0 * (coord(anchors[i], c) - coord(anchors[0], c));
        double b = sq(ranges[0]) - sq(ranges[i]) + norm2(anchors[i]) - norm2(anchors[0]);
        for (int r = 0; r < dim; ++r) {
            for (int c = 0; c < dim; ++c) mtm[r][c] += row[r] * row[c];
            mtb[r] += row[r] * b;
        }
    }

    if (detail::condition_number(mtm, dim) > 1e8) throw DegenerateGeometry{};
    std::array<double, 3> sol{};
    if (!detail::solve_linear(mtm, mtb, dim, sol)) throw DegenerateGeometry{};
    return {sol[0], sol[1], dim == 3 ? sol[2] : z_fixed};
}

/// Damped Gauss-Newton refinement of min sum_i (||x - a_i|| - d_i)^2.
/// Accepted steps never increase the cost; an iterate landing exactly on a
/// reference point is nudged 1e-9 m in +x to keep the Jacobian defined.
/// cost_trace, when given, records the cost after each accepted step.
inline PositionEstimate refine_gauss_newton(Position init, std::span<const Position> anchors,
                                            std::span<const double> ranges,
                                            const SolverConfig& cfg,
                                            std::vector<double>* cost_trace = nullptr) {
    const int dim = cfg.mode == SolverMode::Planar2D ? 2 : 3;
    const std::size_t need = static_cast<std::size_t>(dim) + 1;
    if (anchors.size() < need || anchors.size() != ranges.size()) throw InsufficientAnchors{};
    const std::size_t n = anchors.size();

    auto cost_at = [&](const Vec3& x) {
        double c = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double r = detail::planar_or_full_dist(x, anchors[i], cfg.mode) - ranges[i];
            c += r * r;
        }
        return c;
    };
    auto nudge_off_anchor = [&](Vec3& x) {
        for (std::size_t i = 0; i < n; ++i)
            while (detail::planar_or_full_dist(x, anchors[i], cfg.mode) == 0.0) x.x += 1e-9;
    };

    Vec3 x = init;
    nudge_off_anchor(x);
    double cost = cost_at(x);
    if (cost_trace) cost_trace->push_back(cost);

    PositionEstimate out;
    out.localized = true;
    if (cost == 0.0) {
        out.position = x;
        out.residual = 0.0;
        return out;
    }

    double lambda = cfg.damping0;
    for (int iter = 0; iter < cfg.max_iters; ++iter) {
        std::array<std::array<double, 3>, 3> jtj{};
        std::array<double, 3> jtr{};
        for (std::size_t i = 0; i < n; ++i) {
            auto row = range_jacobian_row(x, anchors[i], cfg.mode);
            double r = detail::planar_or_full_dist(x, anchors[i], cfg.mode) - ranges[i];
            for (int a = 0; a < dim; ++a) {
                for (int b = 0; b < dim; ++b) jtj[a][b] += row[a] * row[b];
                jtr[a] += row[a] * r;
            }
        }
        for (int a = 0; a < dim; ++a) jtj[a][a] += lambda;

        std::array<double, 3> step{};
        std::array<double, 3> rhs = {-jtr[0], -jtr[1], -jtr[2]};
        if (!detail::solve_linear(jtj, rhs, dim, step)) {
            lambda *= 10.0;
            if (lambda > 1e12) break;
            continue;
        }

        Vec3 x_new = {x.x + step[0], x.y + step[1], dim == 3 ? x.z + step[2] : x.z};
        nudge_off_anchor(x_new);
        double cost_new = cost_at(x_new);
        if (cost_new < cost) {
            x = x_new;
            cost = cost_new;
            lambda = std::max(lambda / 10.0, 1e-12);
            if (cost_trace) cost_trace->push_back(cost);
            double step_norm = std::sqrt(step[0] * step[0] + step[1] * step[1] +
                                         (dim == 3 ? step[2] * step[2] : 0.0));
            if (step_norm < cfg.step_tol) break;
        } else {
            lambda *= 10.0;
            if (lambda > 1e12) break;
        }
    }

    out.position = x;
    out.residual = std::sqrt(cost / static_cast<double>(n));
    return out;
}

/// Ring buffers of recent measurements per ordered pair; the smoothed range
/// pools both directions and takes the median, so a single NLOS outlier in a
/// window is fully rejected.
class RangeGraph {
public:
    explicit RangeGraph(std::size_t window = 5) : window_(window) {}

    void add(const RangeMeasurement& m) {
        auto& buf = buffers_[{m.initiator, m.responder}];
        buf.push_front(m);
        while (buf.size() > window_) buf.pop_back();
    }

    std::optional<double> smoothed_range(NodeId i, NodeId j) const {
        std::vector<double> pool;
        collect(i, j, pool);
        collect(j, i, pool);
        if (pool.empty()) return std::nullopt;
        std::sort(pool.begin(), pool.end());
        std::size_t n = pool.size();
        if (n % 2 == 1) return pool[n / 2];
        return (pool[n / 2 - 1] + pool[n / 2]) / 2.0;
    }

    std::set<NodeId> neighbors(NodeId i) const {
        std::set<NodeId> out;
        for (const auto& [key, buf] : buffers_) {
            if (buf.empty()) continue;
            if (key.first == i) out.insert(key.second);
            if (key.second == i) out.insert(key.first);
        }
        return out;
    }

    std::set<NodeId> nodes() const {
        std::set<NodeId> out;
        for (const auto& [key, buf] : buffers_) {
            if (buf.empty()) continue;
            out.insert(key.first);
            out.insert(key.second);
        }
        return out;
    }

    std::size_t window() const { return window_; }

private:
    void collect(NodeId a, NodeId b, std::vector<double>& pool) const {
        auto it = buffers_.find({a, b});
        if (it == buffers_.end()) return;
        for (const auto& m : it->second) pool.push_back(m.dist);
    }

    std::size_t window_;
    std::map<std::pair<NodeId, NodeId>, std::deque<RangeMeasurement>> buffers_;
};

/// Known altitude for planar solving: z and the altimeter 1-sigma.
struct AltitudeInfo {
    double z = 0.0;
    double sigma = 0.0;
};

/// Wavefront localization from the seeds: rounds sweep nodes in ascending id
/// order, localizing any node that sees enough already-localized neighbors
/// (3 planar, 4 full-3D), until a fixpoint. hop_depth is 1 + the deepest
/// neighbor used; the frame stays Global only if every neighbor used was.
/// In planar mode a node without a known altitude is skipped, and slant
/// ranges are projected through horizontal_projection first.
inline std::map<NodeId, PositionEstimate> propagate_localization(
    const RangeGraph& graph, std::map<NodeId, PositionEstimate> estimates,
    const std::set<NodeId>& seeds, const SolverConfig& cfg,
    const std::map<NodeId, AltitudeInfo>& altitudes = {}) {
    (void)seeds;  // seeds are the already-localized entries in `estimates`
    const std::size_t k = cfg.mode == SolverMode::Planar2D ? 3 : 4;

    std::set<NodeId> candidates = graph.nodes();
    for (const auto& [id, est] : estimates) candidates.insert(id);
    for (NodeId id : candidates) estimates.try_emplace(id);  // default: unlocalized

    auto sigma_of = [&](NodeId id) {
        auto it = altitudes.find(id);
        return it == altitudes.end() ? 0.0 : it->second.sigma;
    };

    bool changed = true;
    while (changed) {
        changed = false;
        for (NodeId id : candidates) {
            auto self = estimates.find(id);
            if (self != estimates.end() && self->second.localized) continue;

            const AltitudeInfo* alt = nullptr;
            if (cfg.mode == SolverMode::Planar2D) {
                auto it = altitudes.find(id);
                if (it == altitudes.end()) continue;  // z unknown, cannot solve planar
                alt = &it->second;
            }

            std::vector<Position> refs;
            std::vector<double> dists;
            int max_hop = 0;
            bool all_global = true;
            for (NodeId j : graph.neighbors(id)) {
                auto jt = estimates.find(j);
                if (jt == estimates.end() || !jt->second.localized) continue;
                auto d = graph.smoothed_range(id, j);
                if (!d) continue;
                double use = *d;
                if (cfg.mode == SolverMode::Planar2D) {
                    double dz = alt->z - jt->second.position.z;
                    double sig = std::sqrt(alt->sigma * alt->sigma + sigma_of(j) * sigma_of(j));
                    auto proj = horizontal_projection(*d, dz, sig);
                    if (!proj) continue;
                    use = *proj;
                }
                refs.push_back(jt->second.position);
                dists.push_back(use);
                max_hop = std::max(max_hop, jt->second.hop_depth);
                all_global = all_global && jt->second.frame == Frame::Global;
            }
            if (refs.size() < k) continue;

            double z_fixed = alt ? alt->z : 0.0;
            Position init;
            try {
                init = trilaterate_linear(refs, dists, cfg.mode, z_fixed);
            } catch (const DegenerateGeometry&) {
                continue;  // may succeed in a later round with more neighbors
            }
            PositionEstimate est = refine_gauss_newton(init, refs, dists, cfg);
            if (cfg.mode == SolverMode::Planar2D) est.position.z = z_fixed;
            est.hop_depth = 1 + max_hop;
            est.frame = all_global ? Frame::Global : Frame::Relative;
            estimates[id] = est;
            changed = true;
        }
    }
    return estimates;
}

}  // namespace meshloc
