// Acceptance suite: one pass/fail line per criterion, exit code equals the
// number of failures.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "stringlab/fieldio.hpp"
#include "stringlab/fractal.hpp"
#include "stringlab/kernel.hpp"
#include "stringlab/occupation.hpp"
#include "stringlab/pipelines.hpp"
#include "stringlab/simulate.hpp"

using namespace stringlab;

namespace {

int failures = 0;

void report(const char* id, bool pass, const std::string& detail, double seconds) {
    std::printf("[%s] %-28s %s  (%.1fs)\n", pass ? "PASS" : "FAIL", id, detail.c_str(), seconds);
    if (!pass) ++failures;
}

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double elapsed() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof(buf), f, ap);
    va_end(ap);
    return buf;
}

// C1: closed form vs quadrature <= 1e-8; F >= (2pi)^{-1/2} on [0, 20]
void c1_kernel_identity() {
    Timer tm;
    KernelConfig quad;
    quad.mode = EvalMode::Quadrature;
    double max_gap = 0.0;
    for (double x : {0.0, 0.5, 1.0, 2.0, 5.0, 10.0})
        max_gap = std::max(max_gap, std::abs(profile_f(x) - profile_f(x, quad)));
    double fmin = 1e300;
    for (int i = 0; i <= 2000; ++i) fmin = std::min(fmin, profile_f(20.0 * i / 2000.0));
    const bool pass = max_gap <= 1e-8 && fmin >= 0.3989422804014327;
    report("C1", pass, fmt("kernel identity: max|dF|=%.2e, min F=%.6f", max_gap, fmin),
           tm.elapsed());
}

// C2: h_tail monotone nonincreasing on [0,10]; h_tail(10) <= 1e-6
void c2_asymptotics() {
    Timer tm;
    bool mono = true;
    double prev = profile_h_tail(0.0);
    for (int i = 1; i <= 1000; ++i) {
        const double v = profile_h_tail(10.0 * i / 1000.0);
        mono = mono && v <= prev;
        prev = v;
    }
    const double tail10 = profile_h_tail(10.0);
    const bool pass = mono && tail10 <= 1e-6;
    report("C2", pass, fmt("asymptotics: monotone=%d, h_tail(10)=%.2e", mono ? 1 : 0, tail10),
           tm.elapsed());
}

// C3: scaling identity <= 1e-12 relative, 100 pairs x c in {0.5, 2, 3}
void c3_scaling() {
    Timer tm;
    GaussianStream g(314);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        SpaceTimePoint p{g.uniform01(), 2.0 * g.uniform01() - 1.0};
        SpaceTimePoint q{g.uniform01(), 2.0 * g.uniform01() - 1.0};
        for (double c : {0.5, 2.0, 3.0}) {
            const double rel = scaling_gap(p, q, c) /
                               std::max(1.0, c * c * increment_variance(p, q));
            worst = std::max(worst, rel);
        }
    }
    report("C3", worst <= 1e-12, fmt("scaling: worst relative gap=%.2e", worst), tm.elapsed());
}

// C4: sandwich ratio in (c_low, 2] over 1e4 pairs, c_low > 0.2
void c4_sandwich() {
    Timer tm;
    GaussianStream g(2718);
    double lo = 1e300, hi = 0.0;
    for (int i = 0; i < 10000; ++i) {
        SpaceTimePoint p{g.uniform01(), g.uniform01()};
        SpaceTimePoint q{g.uniform01(), g.uniform01()};
        const double den = std::abs(p.x - q.x) + std::sqrt(std::abs(p.t - q.t));
        if (den == 0.0) continue;
        const double r = increment_variance(p, q) / den;
        lo = std::min(lo, r);
        hi = std::max(hi, r);
    }
    const bool pass = hi <= 2.0 && lo > 0.2;
    report("C4", pass, fmt("sandwich: ratio in [%.4f, %.4f] (recorded c_low)", lo, hi),
           tm.elapsed());
}

// C5: 32x32 covariance lambda_min >= -1e-8 pre-jitter; 200-replica
// increment variances within 3 SE of the equal-time and mixed-time targets
void c5_psd_simulation() {
    Timer tm;
    GridSpec g{0.5, 1.0, 0.0, 1.0, 32, 32};
    Eigen::MatrixXd cov = build_cov_matrix(g);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov, Eigen::EigenvaluesOnly);
    const double lmin = es.eigenvalues().minCoeff();

    const int reps = 200;
    ReplicaBatch batch = sample_replicas(g, 1, 1001, reps);
    auto node = [&](int it, int ix) { return static_cast<std::size_t>(it) * g.n_x + ix; };
    auto zscore = [&](std::size_t a, std::size_t b, double target) {
        double s = 0.0;
        for (const auto& f : batch.samples) {
            const double d = f.values[a] - f.values[b];
            s += d * d;
        }
        const double vhat = s / reps;
        return (vhat - target) / (target * std::sqrt(2.0 / reps));
    };
    const double z_space = zscore(node(16, 8), node(16, 24),
                                  std::abs(g.x_at(8) - g.x_at(24)));
    const double z_time = zscore(node(0, 8), node(31, 8),
                                 increment_variance({g.t_at(0), g.x_at(8)},
                                                    {g.t_at(31), g.x_at(8)}));
    const bool pass = lmin >= -1e-8 && std::abs(z_space) <= 3.0 && std::abs(z_time) <= 3.0;
    report("C5", pass,
           fmt("PSD/simulation: lambda_min=%.2e, z(equal-time)=%.2f, z(mixed)=%.2f", lmin,
               z_space, z_time),
           tm.elapsed());
}

// C6: LND scans positive; removing the |s-t| cap must drop the minimum
// ratio by at least 10x
void c6_lnd() {
    Timer tm;
    LndConfig cfg;
    cfg.epsilon = 0.2;
    cfg.min_gap = 0.3;
    cfg.samples = 10000;
    cfg.seed = 77;

    cfg.lemma = LndLemma::PointGivenPoint;
    const double m13 = lnd_scan(cfg).min_ratio;
    cfg.lemma = LndLemma::SeparatedTimes;
    const double m14 = lnd_scan(cfg).min_ratio;
    cfg.lemma = LndLemma::SeparatedPositions;
    cfg.h0 = 0.01;
    const double m15 = lnd_scan(cfg).min_ratio;
    LndConfig probe = cfg;
    probe.h0.reset();
    const double m15u = lnd_scan(probe).min_ratio;

    const bool positives = m13 > 0.0 && m14 > 0.0 && m15 > 0.0;
    const bool probe_10x = m15u <= m15 / 10.0;
    report("C6", positives && probe_10x,
           fmt("LND: minima %.4f/%.4f/%.4f > 0; probe %.4f is %.1fx smaller (need >= 10x)", m13,
               m14, m15, m15u, m15 / m15u),
           tm.elapsed());
}

// C7: slice graph slopes over >= 20 exact 4096-node paths
void c7_slice_dimensions() {
    Timer tm;
    EstimateConfig space;
    space.set = EstimateSet::GraphSpace;
    space.seed = 505;
    space.replicas = 24;
    space.max_draws = 24;
    EstimateReport rs = run_estimate(space);

    EstimateConfig time = space;
    time.set = EstimateSet::GraphTime;
    time.seed = 606;
    EstimateReport rt = run_estimate(time);

    const bool pass = rs.estimable >= 20 && std::abs(rs.mean_slope - 1.5) <= 0.1 &&
                      rt.estimable >= 20 && std::abs(rt.mean_slope - 1.75) <= 0.1;
    report("C7", pass,
           fmt("slice graphs: space %.3f+-%.3f (target 1.5+-0.1), time %.3f+-%.3f (target 1.75+-0.1)",
               rs.mean_slope, rs.stderr_of_mean, rt.mean_slope, rt.stderr_of_mean),
           tm.elapsed());
}

// C8: level-set dimension, d = 1, 64x128 grid, target 1.75 +- 0.25
void c8_level_set() {
    Timer tm;
    EstimateConfig lvl;
    lvl.set = EstimateSet::Level;
    lvl.d = 1;
    lvl.seed = 909;
    lvl.replicas = 24;
    lvl.max_draws = 96;
    EstimateReport r = run_estimate(lvl);
    const bool pass = r.estimable >= 20 && std::abs(r.mean_slope - 1.75) <= 0.25;
    report("C8", pass,
           fmt("level set: mean slope %.3f+-%.3f over %d estimable replicas (target 1.75+-0.25)",
               r.mean_slope, r.stderr_of_mean, r.estimable),
           tm.elapsed());
}

// C9: theoretical dimension table, d = 1..13, exact including EMPTY markers
void c9_dims_table() {
    Timer tm;
    const std::string expected =
        "d,range,graph,level,double_I,double_II\n"
        "1,1,2.75,1.75,3.75,2.75\n"
        "2,2,3.5,1.5,3.5,2.5\n"
        "3,3,4.25,1.25,3.25,2.25\n"
        "4,4,5,1,3,2\n"
        "5,5,5.5,0.5,2.75,1.5\n"
        "6,6,6,EMPTY,2.5,1\n"
        "7,6,6,EMPTY,2.25,0.5\n"
        "8,6,6,EMPTY,2,EMPTY\n"
        "9,6,6,EMPTY,1.5,EMPTY\n"
        "10,6,6,EMPTY,1,EMPTY\n"
        "11,6,6,EMPTY,0.5,EMPTY\n"
        "12,6,6,EMPTY,EMPTY,EMPTY\n"
        "13,6,6,EMPTY,EMPTY,EMPTY\n";
    const bool pass = dims_table_csv(13) == expected;
    report("C9", pass, "dimension table d=1..13 exact", tm.elapsed());
}

// C10: occupation density formula, f in {1, v, v^2, bump}, <= 2% relative
void c10_occupation_density() {
    Timer tm;
    GridSpec g{0.5, 1.0, 0.0, 1.0, 64, 64};
    FieldSample f = sample_field(g, 1, 515);
    Region region = Region::whole(g);
    const double n = 1e3;
    const double area = g.t_step() * g.x_step();

    // u-grid wide enough to hold all kernel mass
    double lo = 1e300, hi = -1e300;
    for (double v : f.values) { lo = std::min(lo, v); hi = std::max(hi, v); }
    lo -= 8.0 / std::sqrt(n);
    hi += 8.0 / std::sqrt(n);
    const int m = 2048;

    struct Fn { const char* name; double (*eval)(double); };
    const Fn fns[] = {{"1", [](double) { return 1.0; }},
                      {"v", [](double v) { return v; }},
                      {"v^2", [](double v) { return v * v; }},
                      {"bump", [](double v) { return std::exp(-0.5 * v * v); }}};
    double worst = 0.0;
    std::string detail;
    for (const Fn& fn : fns) {
        double direct = 0.0;
        for (double v : f.values) direct += fn.eval(v) * area;
        double smoothed = 0.0;
        for (int i = 0; i <= m; ++i) {
            const double u = lo + (hi - lo) * i / m;
            const double w = (i == 0 || i == m) ? 0.5 : 1.0;
            smoothed += w * fn.eval(u) * local_time_at(f, region, {u}, n).value;
        }
        smoothed *= (hi - lo) / m;
        const double rel = std::abs(smoothed - direct) / std::abs(direct);
        worst = std::max(worst, rel);
        detail += fmt("%s:%.2f%% ", fn.name, 100.0 * rel);
    }
    report("C10", worst <= 0.02, "occupation density formula: " + detail, tm.elapsed());
}

// C11: integral regime bounds hold; perturbed exponent grows > 10x
void c11_regimes() {
    Timer tm;
    std::vector<std::pair<double, double>> sweep;
    for (int k = 1; k <= 7; ++k) sweep.emplace_back(std::pow(10.0, -k), 1.0);
    std::vector<std::pair<double, double>> sweep5(sweep.begin(), sweep.begin() + 5);

    RegimeReport r1 = regime_bound_report(1.0, 2.0, 1.0, sweep);
    RegimeReport r2 = regime_bound_report(0.5, 2.0, 1.0, sweep5);
    RegimeReport r3 = regime_bound_report(0.5, 1.0, 1.0, sweep);
    RegimeReport probe = regime_bound_report(1.0, 2.0, 1.0, sweep, -0.2);
    const bool bounded = r1.growth <= 3.0 && r2.growth <= 3.0 && r3.growth <= 3.0;
    const bool blows = probe.growth > 10.0;
    report("C11", bounded && blows,
           fmt("integral regimes: growths %.2f/%.2f/%.2f bounded; probe grows %.1fx", r1.growth,
               r2.growth, r3.growth, probe.growth),
           tm.elapsed());
}

// C12: energy integral converges at gamma=4, diverges at gamma=8
void c12_energy() {
    Timer tm;
    const double c64 = anisotropic_energy(4.0, 64);
    const double c128 = anisotropic_energy(4.0, 128);
    const double change = std::abs(c128 - c64) / c64;
    const double growth = anisotropic_energy(8.0, 128) / anisotropic_energy(8.0, 32);
    const bool pass = change < 0.05 && growth > 2.0;
    report("C12", pass,
           fmt("energy: gamma=4 64->128 change %.2f%% (<5%%), gamma=8 32->128 growth %.2fx (>2x)",
               100.0 * change, growth),
           tm.elapsed());
}

} // namespace

int main() {
    c1_kernel_identity();
    c2_asymptotics();
    c3_scaling();
    c4_sandwich();
    c5_psd_simulation();
    c6_lnd();
    c7_slice_dimensions();
    c8_level_set();
    c9_dims_table();
    c10_occupation_density();
    c11_regimes();
    c12_energy();
    std::printf("%d of 12 criteria failed\n", failures);
    return failures;
}
