#include "stringlab/occupation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "stringlab/numerics.hpp"

namespace stringlab {

bool local_times_exist(int d) {
    if (d < 1) throw std::invalid_argument("local_times_exist: d must be >= 1");
    return d < 6;
}

BinSpec BinSpec::from_field(const FieldSample& field, int bins) {
    if (bins < 2) throw std::invalid_argument("BinSpec: need >= 2 bins");
    BinSpec spec;
    const std::size_t n = field.grid.n_nodes();
    for (int j = 0; j < field.d; ++j) {
        double mean = 0.0, m2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double v = field.values[i * field.d + j];
            mean += v;
            m2 += v * v;
        }
        mean /= static_cast<double>(n);
        const double sd = std::sqrt(std::max(1e-300, m2 / n - mean * mean));
        spec.lo.push_back(mean - 4.0 * sd);
        spec.hi.push_back(mean + 4.0 * sd);
        spec.count.push_back(bins);
    }
    return spec;
}

namespace {

int clamp_bin(double v, double lo, double hi, int count) {
    if (v <= lo) return 0;
    if (v >= hi) return count - 1;
    const int b = static_cast<int>((v - lo) / (hi - lo) * count);
    return std::min(b, count - 1);
}

// Cell area represented by each node of a uniform grid.
double node_area(const GridSpec& g) { return g.t_step() * g.x_step(); }

} // namespace

double OccupationHistogram::total_mass() const {
    double s = 0.0;
    for (double m : masses) s += m;
    return s;
}

double OccupationHistogram::density_at(const std::vector<double>& u) const {
    if (static_cast<int>(u.size()) != d)
        throw std::invalid_argument("density_at: wrong arity");
    std::size_t flat = 0;
    double volume = 1.0;
    for (int j = 0; j < d; ++j) {
        const int b = clamp_bin(u[j], bins.lo[j], bins.hi[j], bins.count[j]);
        flat = flat * bins.count[j] + b;
        volume *= (bins.hi[j] - bins.lo[j]) / bins.count[j];
    }
    return masses[flat] / volume;
}

OccupationHistogram occupation_histogram(const FieldSample& field, const Region& region,
                                         const BinSpec& bins) {
    if (field.d > 3)
        throw std::invalid_argument(
            "occupation_histogram: binning supports d <= 3; use local_time_at for higher d");
    if (static_cast<int>(bins.count.size()) != field.d)
        throw std::invalid_argument("occupation_histogram: bin spec arity != d");
    OccupationHistogram hist;
    hist.d = field.d;
    hist.bins = bins;
    std::size_t total_bins = 1;
    for (int c : bins.count) total_bins *= static_cast<std::size_t>(c);
    hist.masses.assign(total_bins, 0.0);

    const double area = node_area(field.grid);
    for (int it = 0; it < field.grid.n_t; ++it) {
        for (int ix = 0; ix < field.grid.n_x; ++ix) {
            if (!region.contains(field.grid.t_at(it), field.grid.x_at(ix))) continue;
            std::size_t flat = 0;
            for (int j = 0; j < field.d; ++j)
                flat = flat * bins.count[j] +
                       clamp_bin(field.value(it, ix, j), bins.lo[j], bins.hi[j], bins.count[j]);
            hist.masses[flat] += area;
            hist.region_area += area;
        }
    }
    return hist;
}

LocalTimeEstimate local_time_at(const FieldSample& field, const Region& region,
                                const std::vector<double>& u, double n) {
    if (n <= 0.0) throw std::invalid_argument("local_time_at: n must be positive");
    if (static_cast<int>(u.size()) != field.d)
        throw std::invalid_argument("local_time_at: u arity != d");
    const double area = node_area(field.grid);
    const double norm = std::pow(n / (2.0 * M_PI), 0.5 * field.d);
    double sum = 0.0;
    for (int it = 0; it < field.grid.n_t; ++it) {
        for (int ix = 0; ix < field.grid.n_x; ++ix) {
            if (!region.contains(field.grid.t_at(it), field.grid.x_at(ix))) continue;
            double q = 0.0;
            for (int j = 0; j < field.d; ++j) {
                const double dv = field.value(it, ix, j) - u[j];
                q += dv * dv;
            }
            sum += std::exp(-0.5 * n * q);
        }
    }
    LocalTimeEstimate est;
    est.u = u;
    est.n = n;
    est.value = norm * sum * area;
    return est;
}

double power_denom_integral(double a, double b, double alpha, double beta, double eta) {
    if (a <= 0.0 || b <= 0.0 || alpha <= 0.0 || beta < 0.0 || eta < 0.0)
        throw std::invalid_argument("power_denom_integral: parameters out of range");
    auto f = [&](double t) {
        return 1.0 / (std::pow(a + std::pow(t, alpha), beta) * std::pow(b + t, eta));
    };
    // Geometric panels resolve the boundary layer at t ~ a^{1/alpha}.
    double t0 = std::min({std::pow(a, 1.0 / alpha), b, 0.5});
    t0 = std::max(t0, 1e-14);
    std::vector<double> brk{0.0, t0};
    while (brk.back() < 1.0) brk.push_back(std::min(1.0, brk.back() * 2.0));
    return integrate_panels(f, brk, 32);
}

RegimeReport regime_bound_report(double alpha, double beta, double eta,
                                 const std::vector<std::pair<double, double>>& sweep,
                                 double exponent_shift) {
    if (sweep.empty()) throw std::invalid_argument("regime_bound_report: empty sweep");
    const double ab = alpha * beta;
    RegimeReport rep;
    if (ab > 1.0) {
        rep.regime = 1;
    } else if (ab == 1.0) {
        rep.regime = 2;
    } else if (ab > 0.0 && std::abs(ab + eta - 1.0) > 1e-12) {
        rep.regime = 3;
    } else {
        throw std::invalid_argument(
            "regime_bound_report: parameters match no regime (alpha*beta + eta == 1)");
    }

    for (auto [a, b] : sweep) {
        RegimeSweepPoint pt;
        pt.a = a;
        pt.b = b;
        pt.integral = power_denom_integral(a, b, alpha, beta, eta);
        switch (rep.regime) {
            case 1:
                pt.bound_shape = 1.0 / (std::pow(a, beta - 1.0 / alpha + exponent_shift) *
                                        std::pow(b, eta));
                break;
            case 2:
                pt.bound_shape = std::log1p(b * std::pow(a, -1.0 / alpha)) / std::pow(b, eta);
                break;
            default:
                pt.bound_shape = std::pow(b, 1.0 - ab - eta) + 1.0;
        }
        pt.ratio = pt.integral / pt.bound_shape;
        rep.points.push_back(pt);
    }
    double lo = rep.points.front().ratio, hi = lo;
    for (const auto& p : rep.points) {
        lo = std::min(lo, p.ratio);
        hi = std::max(hi, p.ratio);
    }
    rep.sup_ratio = hi;
    rep.growth = hi / lo;
    return rep;
}

double anisotropic_energy(double gamma_exp, int resolution) {
    if (gamma_exp <= 0.0) throw std::invalid_argument("anisotropic_energy: gamma must be positive");
    if (resolution < 2) throw std::invalid_argument("anisotropic_energy: resolution must be >= 2");
    // Difference-variable reduction of the 4-fold midpoint rule: cell
    // centers u_m = (m + 1/2)/R carry pair weight 2(1 - u_m)/R per axis,
    // and never sit on the s = t or x = y diagonal.
    const int R = resolution;
    const double p = -0.5 * gamma_exp;
    std::vector<double> u(R), w(R);
    for (int m = 0; m < R; ++m) {
        u[m] = (m + 0.5) / R;
        w[m] = 2.0 * (1.0 - u[m]) / R;
    }
    double total = 0.0;
    for (int m = 0; m < R; ++m) {
        const double squ = std::sqrt(u[m]);
        double row = 0.0;
        for (int k = 0; k < R; ++k) row += w[k] * std::pow(squ + u[k], p);
        total += w[m] * row;
    }
    return total;
}

} // namespace stringlab
