#include "stringlab/kernel.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "stringlab/numerics.hpp"

namespace stringlab {

namespace {
constexpr double kInvSqrt4Pi = 0.28209479177387814; // (4*pi)^{-1/2}
constexpr double kDegenerateVar = 1e-14;
} // namespace

void KernelConfig::validate() const {
    if (quadrature_half_width < 8.0)
        throw std::invalid_argument("KernelConfig: quadrature_half_width must be >= 8");
    if (quadrature_points < 64)
        throw std::invalid_argument("KernelConfig: quadrature_points must be >= 64");
}

double heat_kernel1(double z) {
    return kInvSqrt4Pi * std::exp(-0.25 * z * z);
}

namespace {

// Quadrature of int G_1(z) |z - x| dz with the integrand split at its kink.
double profile_h_quadrature(double x, const KernelConfig& cfg) {
    cfg.validate();
    const double w = cfg.quadrature_half_width;
    const int n = cfg.quadrature_points;
    auto f = [x](double z) { return heat_kernel1(z) * std::abs(z - x); };
    if (x > -w && x < w) {
        double parts[] = {-w, x, w};
        return integrate_panels(f, parts, n);
    }
    double parts[] = {-w, w};
    return integrate_panels(f, parts, n);
}

} // namespace

double profile_h(double x, const KernelConfig& cfg) {
    x = std::abs(x);
    if (cfg.mode == EvalMode::Quadrature) return profile_h_quadrature(x, cfg);
    // E|Z - x| for Z ~ N(0,2): 4 G_1(x) + x erf(x/2).
    return 4.0 * heat_kernel1(x) + x * std::erf(0.5 * x);
}

double profile_h_tail(double x) {
    if (x < 0.0) throw std::invalid_argument("profile_h_tail: x must be >= 0");
    // 2 int_x^inf (z - x) G_1(z) dz = 4 G_1(x) - x erfc(x/2)
    return 4.0 * heat_kernel1(x) - x * std::erfc(0.5 * x);
}

double profile_f(double a, const KernelConfig& cfg) {
    return profile_h(std::abs(a), cfg);
}

double increment_variance(const SpaceTimePoint& p, const SpaceTimePoint& q,
                          const KernelConfig& cfg) {
    if (p.t < 0.0 || q.t < 0.0)
        throw std::invalid_argument("increment_variance: times must be >= 0");
    const double tau = std::abs(p.t - q.t);
    const double dx = std::abs(p.x - q.x);
    if (tau == 0.0) return dx;
    const double sq = std::sqrt(tau);
    return sq * profile_f(dx / sq, cfg);
}

double point_variance(const SpaceTimePoint& p, const KernelConfig& cfg) {
    return increment_variance(p, kOrigin, cfg);
}

double pinned_covariance(const SpaceTimePoint& p, const SpaceTimePoint& q,
                         const KernelConfig& cfg) {
    return 0.5 * (point_variance(p, cfg) + point_variance(q, cfg) -
                  increment_variance(p, q, cfg));
}

double scaling_gap(const SpaceTimePoint& p, const SpaceTimePoint& q, double c,
                   const KernelConfig& cfg) {
    if (c <= 0.0) throw std::invalid_argument("scaling_gap: c must be positive");
    const double c2 = c * c;
    const double c4 = c2 * c2;
    const SpaceTimePoint ps{c4 * p.t, c2 * p.x};
    const SpaceTimePoint qs{c4 * q.t, c2 * q.x};
    return std::abs(increment_variance(ps, qs, cfg) - c2 * increment_variance(p, q, cfg));
}

double increment_msd(const SpaceTimePoint& p0, const SpaceTimePoint& p1,
                     const SpaceTimePoint& q0, const SpaceTimePoint& q1,
                     const KernelConfig& cfg) {
    // (a - b + c - d)^2 identity with a = U(p1), b = U(p0), c = U(q0), d = U(q1)
    const double v = increment_variance(p1, p0, cfg) + increment_variance(q0, q1, cfg) +
                     increment_variance(p1, q1, cfg) + increment_variance(p0, q0, cfg) -
                     increment_variance(p1, q0, cfg) - increment_variance(p0, q1, cfg);
    return v > 0.0 ? v : 0.0;
}

CondVarQuery CondVarQuery::point_given_point(const SpaceTimePoint& x, const SpaceTimePoint& y) {
    CondVarQuery q;
    q.target = Target::PointGivenPoint;
    q.points[0] = x;
    q.points[1] = y;
    return q;
}

CondVarQuery CondVarQuery::increment_given_increment(const SpaceTimePoint& p0,
                                                     const SpaceTimePoint& p1,
                                                     const SpaceTimePoint& q0,
                                                     const SpaceTimePoint& q1) {
    CondVarQuery q;
    q.target = Target::IncrementGivenIncrement;
    q.points = {p0, p1, q0, q1};
    return q;
}

double conditional_variance(const CondVarQuery& query, const KernelConfig& cfg) {
    if (query.target == CondVarQuery::Target::PointGivenPoint) {
        const double va = point_variance(query.points[0], cfg);
        const double vb = point_variance(query.points[1], cfg);
        if (vb <= kDegenerateVar)
            throw std::invalid_argument("conditional_variance: degenerate conditioning variable");
        const double cov = pinned_covariance(query.points[0], query.points[1], cfg);
        const double v = va - cov * cov / vb;
        return v > 0.0 ? v : 0.0;
    }
    const auto& p = query.points;
    const double sx2 = increment_variance(p[1], p[0], cfg);
    const double sy2 = increment_variance(p[3], p[2], cfg);
    if (sy2 <= kDegenerateVar)
        throw std::invalid_argument("conditional_variance: degenerate conditioning variable");
    const double rho2 = increment_msd(p[0], p[1], p[2], p[3], cfg);
    const double sx = std::sqrt(sx2);
    const double sy = std::sqrt(sy2);
    const double num = (rho2 - (sx - sy) * (sx - sy)) * ((sx + sy) * (sx + sy) - rho2);
    const double v = num / (4.0 * sy2);
    return v > 0.0 ? v : 0.0;
}

double conditional_variance_direct(const CondVarQuery& query, const KernelConfig& cfg) {
    if (query.target == CondVarQuery::Target::PointGivenPoint)
        return conditional_variance(query, cfg);
    const auto& p = query.points;
    const double vx = increment_variance(p[1], p[0], cfg);
    const double vy = increment_variance(p[3], p[2], cfg);
    if (vy <= kDegenerateVar)
        throw std::invalid_argument("conditional_variance_direct: degenerate conditioning variable");
    const double cov = pinned_covariance(p[1], p[3], cfg) - pinned_covariance(p[1], p[2], cfg) -
                       pinned_covariance(p[0], p[3], cfg) + pinned_covariance(p[0], p[2], cfg);
    const double v = vx - cov * cov / vy;
    return v > 0.0 ? v : 0.0;
}

namespace {

double uniform_in(GaussianStream& g, double lo, double hi) {
    return lo + (hi - lo) * g.uniform01();
}

} // namespace

LndScanResult lnd_scan(const LndConfig& cfg) {
    if (cfg.epsilon <= 0.0 || cfg.epsilon >= 1.0)
        throw std::invalid_argument("lnd_scan: epsilon must lie in (0,1)");
    if (cfg.samples <= 0) throw std::invalid_argument("lnd_scan: samples must be positive");
    const double t_lo = cfg.epsilon, t_hi = 1.0 / cfg.epsilon;
    const double x_lo = -1.0 / cfg.epsilon, x_hi = 1.0 / cfg.epsilon;
    const double L = cfg.min_gap;

    if (cfg.lemma == LndLemma::SeparatedTimes && L > t_hi - t_lo)
        throw std::invalid_argument("lnd_scan: time gap L exceeds the box, no admissible pairs");
    if (cfg.lemma == LndLemma::SeparatedPositions && L > x_hi - x_lo)
        throw std::invalid_argument("lnd_scan: space gap L exceeds the box, no admissible pairs");
    if (cfg.lemma != LndLemma::PointGivenPoint && L <= 0.0)
        throw std::invalid_argument("lnd_scan: separation L must be positive");

    GaussianStream g(mix_seed(cfg.seed, 0x6c6e64, static_cast<int>(cfg.lemma)));
    LndScanResult res;
    res.min_ratio = std::numeric_limits<double>::infinity();

    const long max_attempts = 1000L * cfg.samples + 1000;
    long attempts = 0;
    int accepted = 0;
    while (accepted < cfg.samples) {
        if (++attempts > max_attempts)
            throw std::runtime_error("lnd_scan: admissible region too thin, sampling failed");
        CondVarQuery q;
        double denom = 0.0;
        if (cfg.lemma == LndLemma::PointGivenPoint) {
            SpaceTimePoint a{uniform_in(g, t_lo, t_hi), uniform_in(g, x_lo, x_hi)};
            SpaceTimePoint b{uniform_in(g, t_lo, t_hi), uniform_in(g, x_lo, x_hi)};
            q = CondVarQuery::point_given_point(a, b);
            denom = std::abs(a.x - b.x) + std::sqrt(std::abs(a.t - b.t));
        } else if (cfg.lemma == LndLemma::SeparatedTimes) {
            const double t1 = uniform_in(g, t_lo, t_hi), t2 = uniform_in(g, t_lo, t_hi);
            const double s1 = uniform_in(g, t_lo, t_hi), s2 = uniform_in(g, t_lo, t_hi);
            if (std::abs(t2 - t1) < L || std::abs(s2 - s1) < L) continue;
            SpaceTimePoint p0{t1, uniform_in(g, x_lo, x_hi)};
            SpaceTimePoint p1{t2, uniform_in(g, x_lo, x_hi)};
            SpaceTimePoint q0{s1, uniform_in(g, x_lo, x_hi)};
            SpaceTimePoint q1{s2, uniform_in(g, x_lo, x_hi)};
            q = CondVarQuery::increment_given_increment(p0, p1, q0, q1);
            denom = std::abs(p0.x - q0.x) + std::abs(p1.x - q1.x) +
                    std::sqrt(std::abs(p0.t - q0.t)) + std::sqrt(std::abs(p1.t - q1.t));
        } else {
            const double t = uniform_in(g, t_lo, t_hi);
            double s;
            if (cfg.h0) {
                if (*cfg.h0 <= 0.0)
                    throw std::invalid_argument("lnd_scan: h0 must be positive");
                s = t + uniform_in(g, -*cfg.h0, *cfg.h0);
                if (s < t_lo || s > t_hi) continue;
            } else {
                s = uniform_in(g, t_lo, t_hi);
            }
            const double x1 = uniform_in(g, x_lo, x_hi), x2 = uniform_in(g, x_lo, x_hi);
            if (std::abs(x2 - x1) < L) continue;
            const double y1 = x1 + uniform_in(g, -0.5 * L, 0.5 * L);
            const double y2 = x2 + uniform_in(g, -0.5 * L, 0.5 * L);
            if (std::abs(y2 - y1) < L) continue;
            if (y1 < x_lo || y1 > x_hi || y2 < x_lo || y2 > x_hi) continue;
            q = CondVarQuery::increment_given_increment({t, x1}, {t, x2}, {s, y1}, {s, y2});
            denom = std::sqrt(std::abs(s - t)) + std::abs(x1 - y1) + std::abs(x2 - y2);
        }
        if (denom <= 0.0) continue;
        const double ratio = conditional_variance(q) / denom;
        if (ratio < res.min_ratio) {
            res.min_ratio = ratio;
            res.argmin = q.points;
        }
        ++accepted;
    }
    res.samples_used = accepted;
    return res;
}

} // namespace stringlab
