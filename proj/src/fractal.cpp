#include "stringlab/fractal.hpp"

#include <cmath>
#include <stdexcept>
#include <unordered_set>

#include "stringlab/numerics.hpp"

namespace stringlab {

namespace {
void require_d(int d) {
    if (d < 1) throw std::invalid_argument("dimension formulas need d >= 1");
}
} // namespace

DimValue range_dimension(int d) {
    require_d(d);
    return std::min<double>(d, 6.0);
}

DimValue graph_dimension(int d) {
    require_d(d);
    if (d < 4) return 2.0 + 0.75 * d;
    if (d < 6) return 3.0 + 0.5 * d;
    return 6.0;
}

DimValue level_set_dimension(int d) {
    require_d(d);
    if (d < 4) return 2.0 - 0.25 * d;
    if (d < 6) return 3.0 - 0.5 * d;
    return std::nullopt;
}

DimValue double_time_i_dimension(int d) {
    require_d(d);
    if (d < 8) return 4.0 - 0.25 * d;
    if (d < 12) return 6.0 - 0.5 * d;
    return std::nullopt;
}

DimValue double_time_ii_dimension(int d) {
    require_d(d);
    if (d < 4) return 3.0 - 0.25 * d;
    if (d < 8) return 4.0 - 0.5 * d;
    return std::nullopt;
}

double image_product_dimension(double dim_e1, double dim_e2, int d) {
    require_d(d);
    if (dim_e1 < 0.0 || dim_e1 > 1.0 || dim_e2 < 0.0 || dim_e2 > 1.0)
        throw std::invalid_argument("image_product_dimension: axis dimensions must lie in [0,1]");
    return std::min<double>(d, 4.0 * dim_e1 + 2.0 * dim_e2);
}

void CellCloud::push(std::initializer_list<double> coords) {
    if (static_cast<int>(coords.size()) != ambient)
        throw std::invalid_argument("CellCloud::push: wrong arity");
    points.insert(points.end(), coords.begin(), coords.end());
}

namespace {

struct BoxKeyHash {
    std::size_t operator()(const std::array<std::int64_t, 4>& k) const {
        std::uint64_t h = 0x9e3779b97f4a7c15ULL;
        for (std::int64_t v : k) {
            std::uint64_t z = static_cast<std::uint64_t>(v) + h;
            z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
            z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
            h = z ^ (z >> 31);
        }
        return static_cast<std::size_t>(h);
    }
};

std::int64_t lattice_index(double coord, double side) {
    return static_cast<std::int64_t>(std::floor(coord / side));
}

} // namespace

std::size_t box_count(const CellCloud& cloud, double r, BoxMetric metric) {
    if (r <= 0.0) throw std::invalid_argument("box_count: r must be positive");
    if (cloud.size() == 0) throw std::invalid_argument("box_count: empty cloud");
    if (cloud.ambient < 1 || cloud.ambient > 4)
        throw std::invalid_argument("box_count: ambient dimension out of range");
    if (metric == BoxMetric::Parabolic && cloud.ambient != 2)
        throw std::invalid_argument("box_count: parabolic metric needs ambient-2 parameter clouds");

    double sides[4];
    for (int a = 0; a < cloud.ambient; ++a) sides[a] = r;
    if (metric == BoxMetric::Parabolic) {
        sides[0] = r * r * r * r; // time side r^4
        sides[1] = r * r;         // space side r^2
    }

    std::unordered_set<std::array<std::int64_t, 4>, BoxKeyHash> boxes;
    boxes.reserve(cloud.size());
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        const double* p = cloud.point(i);
        std::array<std::int64_t, 4> key{0, 0, 0, 0};
        for (int a = 0; a < cloud.ambient; ++a) key[a] = lattice_index(p[a], sides[a]);
        boxes.insert(key);
    }
    return boxes.size();
}

DimEstimate fit_box_dimension(const CellCloud& cloud, const std::vector<double>& scales,
                              BoxMetric metric) {
    if (scales.size() < 4)
        throw std::invalid_argument("fit_box_dimension: need >= 4 scales");
    DimEstimate est;
    est.scales.reserve(scales.size());
    for (double r : scales) est.scales.emplace_back(r, box_count(cloud, r, metric));

    const double n_pts = static_cast<double>(cloud.size());
    std::vector<double> lx, ly;
    bool in_run = false;
    std::size_t begin = 0, end = 0;
    for (std::size_t i = 0; i < est.scales.size(); ++i) {
        const auto [r, N] = est.scales[i];
        const bool usable = N > 4 && static_cast<double>(N) < 0.9 * n_pts;
        if (usable) {
            if (!in_run) { begin = i; in_run = true; }
            end = i + 1;
            lx.push_back(std::log(1.0 / r));
            ly.push_back(std::log(static_cast<double>(N)));
        }
    }
    if (lx.size() < 4)
        throw std::invalid_argument("fit_box_dimension: fewer than 4 usable scales after the saturation guard");
    est.fit_begin = begin;
    est.fit_end = end;
    LineFit fit = fit_line(lx, ly);
    est.slope = fit.slope;
    est.stderr = fit.slope_stderr;
    return est;
}

std::vector<double> octave_scales(int k_min, int k_max) {
    if (k_min > k_max) throw std::invalid_argument("octave_scales: k_min > k_max");
    std::vector<double> out;
    for (int k = k_min; k <= k_max; ++k) out.push_back(std::ldexp(1.0, -k));
    return out;
}

namespace {

bool within_eps(const FieldSample& f, int it, int ix, const std::vector<double>& u, double eps) {
    for (int j = 0; j < f.d; ++j)
        if (std::abs(f.value(it, ix, j) - u[j]) > eps) return false;
    return true;
}

} // namespace

CellCloud level_set_nodes(const FieldSample& field, const std::vector<double>& u, double eps) {
    if (static_cast<int>(u.size()) != field.d)
        throw std::invalid_argument("level_set_nodes: level vector arity != d");
    if (eps < 0.0) throw std::invalid_argument("level_set_nodes: eps must be >= 0");
    CellCloud cloud;
    cloud.ambient = 2;
    cloud.cell_size_hint = std::max(field.grid.t_step(), field.grid.x_step());
    for (int it = 0; it < field.grid.n_t; ++it)
        for (int ix = 0; ix < field.grid.n_x; ++ix)
            if (within_eps(field, it, ix, u, eps))
                cloud.push({field.grid.t_at(it), field.grid.x_at(ix)});
    return cloud;
}

CellCloud level_crossing_cells(const FieldSample& field, const std::vector<double>& u) {
    if (static_cast<int>(u.size()) != field.d)
        throw std::invalid_argument("level_crossing_cells: level vector arity != d");
    const GridSpec& g = field.grid;
    CellCloud cloud;
    cloud.ambient = 2;
    cloud.cell_size_hint = std::max(g.t_step(), g.x_step());
    for (int it = 0; it + 1 < g.n_t; ++it) {
        for (int ix = 0; ix + 1 < g.n_x; ++ix) {
            bool bracket = true;
            for (int j = 0; j < field.d && bracket; ++j) {
                const double c00 = field.value(it, ix, j);
                const double c01 = field.value(it, ix + 1, j);
                const double c10 = field.value(it + 1, ix, j);
                const double c11 = field.value(it + 1, ix + 1, j);
                const double mn = std::min(std::min(c00, c01), std::min(c10, c11));
                const double mx = std::max(std::max(c00, c01), std::max(c10, c11));
                bracket = mn <= u[j] && u[j] <= mx;
            }
            if (bracket)
                cloud.push({g.t_at(it) + 0.5 * g.t_step() - g.t_min,
                            g.x_at(ix) + 0.5 * g.x_step() - g.x_min});
        }
    }
    return cloud;
}

double level_eps_policy(const GridSpec& grid, double kappa) {
    if (kappa <= 0.0) throw std::invalid_argument("level_eps_policy: kappa must be positive");
    return kappa * (std::pow(grid.t_step(), 0.25) + std::sqrt(grid.x_step()));
}

CellCloud double_time_pairs(const FieldSample& field, double eps, double min_time_gap) {
    if (eps < 0.0) throw std::invalid_argument("double_time_pairs: eps must be >= 0");
    if (min_time_gap <= 0.0)
        throw std::invalid_argument("double_time_pairs: min_time_gap must be positive");
    const GridSpec& g = field.grid;
    if (g.n_nodes() > 4096)
        throw std::invalid_argument(
            "double_time_pairs: pair enumeration is capped at 64x64-node grids");
    if (g.t_max - g.t_min < min_time_gap)
        throw std::invalid_argument("double_time_pairs: no admissible pairs, grid spans less than the gap");
    CellCloud cloud;
    cloud.ambient = 4;
    bool any_admissible = false;
    for (int it1 = 0; it1 < g.n_t; ++it1) {
        for (int it2 = it1 + 1; it2 < g.n_t; ++it2) {
            if (g.t_at(it2) - g.t_at(it1) < min_time_gap) continue;
            any_admissible = true;
            for (int ix1 = 0; ix1 < g.n_x; ++ix1) {
                for (int ix2 = 0; ix2 < g.n_x; ++ix2) {
                    bool close = true;
                    for (int j = 0; j < field.d && close; ++j)
                        close = std::abs(field.value(it2, ix2, j) - field.value(it1, ix1, j)) <= eps;
                    if (close)
                        cloud.push({g.t_at(it1), g.x_at(ix1), g.t_at(it2), g.x_at(ix2)});
                }
            }
        }
    }
    if (!any_admissible)
        throw std::invalid_argument("double_time_pairs: no admissible node pairs at this gap");
    return cloud;
}

CellCloud equal_time_doubles(const FieldSample& field, double eps, double min_space_gap) {
    if (eps < 0.0) throw std::invalid_argument("equal_time_doubles: eps must be >= 0");
    if (min_space_gap <= 0.0)
        throw std::invalid_argument("equal_time_doubles: min_space_gap must be positive");
    const GridSpec& g = field.grid;
    if (g.x_max - g.x_min < min_space_gap)
        throw std::invalid_argument("equal_time_doubles: no admissible triples, grid narrower than the gap");
    CellCloud cloud;
    cloud.ambient = 3;
    bool any_admissible = false;
    for (int it = 0; it < g.n_t; ++it) {
        for (int ix1 = 0; ix1 < g.n_x; ++ix1) {
            for (int ix2 = ix1 + 1; ix2 < g.n_x; ++ix2) {
                if (g.x_at(ix2) - g.x_at(ix1) < min_space_gap) continue;
                any_admissible = true;
                bool close = true;
                for (int j = 0; j < field.d && close; ++j)
                    close = std::abs(field.value(it, ix2, j) - field.value(it, ix1, j)) <= eps;
                if (close) cloud.push({g.t_at(it), g.x_at(ix1), g.x_at(ix2)});
            }
        }
    }
    if (!any_admissible)
        throw std::invalid_argument("equal_time_doubles: no admissible node triples at this gap");
    return cloud;
}

CellCloud graph_cloud(const PathSample& path, double stretch, double fine_r) {
    if (stretch <= 0.0 || fine_r <= 0.0)
        throw std::invalid_argument("graph_cloud: stretch and fine_r must be positive");
    if (path.coords.size() != path.values.size() || path.coords.size() < 2)
        throw std::invalid_argument("graph_cloud: malformed path");
    const double c0 = path.coords.front();
    std::unordered_set<std::array<std::int64_t, 4>, BoxKeyHash> cells;
    for (std::size_t i = 0; i + 1 < path.coords.size(); ++i) {
        const double t0 = path.coords[i] - c0, t1 = path.coords[i + 1] - c0;
        const double v0 = stretch * path.values[i], v1 = stretch * path.values[i + 1];
        const double span = std::max(std::abs(t1 - t0), std::abs(v1 - v0));
        const int m = std::max(1, static_cast<int>(std::ceil(span / (0.5 * fine_r))));
        for (int s = 0; s <= m; ++s) {
            const double a = static_cast<double>(s) / m;
            cells.insert({lattice_index(t0 + a * (t1 - t0), fine_r),
                          lattice_index(v0 + a * (v1 - v0), fine_r), 0, 0});
        }
    }
    CellCloud cloud;
    cloud.ambient = 2;
    cloud.cell_size_hint = fine_r;
    cloud.points.reserve(2 * cells.size());
    for (const auto& k : cells)
        cloud.push({(k[0] + 0.5) * fine_r, (k[1] + 0.5) * fine_r});
    return cloud;
}

CellCloud range_cloud(const FieldSample& field) {
    CellCloud cloud;
    cloud.ambient = field.d;
    cloud.points.reserve(field.grid.n_nodes() * field.d);
    for (int it = 0; it < field.grid.n_t; ++it)
        for (int ix = 0; ix < field.grid.n_x; ++ix)
            for (int j = 0; j < field.d; ++j)
                cloud.points.push_back(field.value(it, ix, j));
    return cloud;
}

} // namespace stringlab
