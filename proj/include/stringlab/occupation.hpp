#ifndef STRINGLAB_OCCUPATION_HPP
#define STRINGLAB_OCCUPATION_HPP

#include <vector>

#include "stringlab/simulate.hpp"

namespace stringlab {

// Local times of the string exist iff d < 6.
bool local_times_exist(int d);

// Sub-rectangle of a grid in parameter space.
struct Region {
    double t_lo, t_hi, x_lo, x_hi;
    bool contains(double t, double x) const {
        return t >= t_lo && t <= t_hi && x >= x_lo && x <= x_hi;
    }
    static Region whole(const GridSpec& g) { return {g.t_min, g.t_max, g.x_min, g.x_max}; }
};

struct BinSpec {
    std::vector<double> lo;  // per value axis
    std::vector<double> hi;
    std::vector<int> count;

    // +-4 empirical standard deviations, `bins` bins per axis.
    static BinSpec from_field(const FieldSample& field, int bins = 128);
};

// Binned occupation measure: each in-region grid node deposits its cell
// area into the bin holding its U value. Total mass equals the
// discretized region area exactly; out-of-range values clamp to the edge
// bins so no mass is lost.
struct OccupationHistogram {
    int d = 1;
    BinSpec bins;
    std::vector<double> masses; // flat, axis-0 major
    double region_area = 0.0;

    double total_mass() const;
    // mass / bin volume at the bin containing u
    double density_at(const std::vector<double>& u) const;
};

OccupationHistogram occupation_histogram(const FieldSample& field, const Region& region,
                                         const BinSpec& bins);

struct LocalTimeEstimate {
    std::vector<double> u;
    double n = 0.0; // smoothing parameter; kernel bandwidth is 1/sqrt(n)
    double value = 0.0;
};

// Gaussian-kernel occupation-density estimate at u:
//   sum over in-region cells of (n/2pi)^{d/2} exp(-n |U - u|^2 / 2) * area.
// The (n/2pi)^{d/2} normalization makes the kernel a probability density,
// so integrating the estimate over u recovers the region area.
LocalTimeEstimate local_time_at(const FieldSample& field, const Region& region,
                                const std::vector<double>& u, double n);

// J(a, b) = int_0^1 dt / ((a + t^alpha)^beta (b + t)^eta), to ~1e-10
// relative accuracy via geometric panel splitting around the boundary
// layer at t ~ a^{1/alpha}.
double power_denom_integral(double a, double b, double alpha, double beta, double eta);

struct RegimeSweepPoint {
    double a = 1.0, b = 1.0;
    double integral = 0.0;
    double bound_shape = 0.0; // the regime's upper-bound shape at (a, b)
    double ratio = 0.0;       // integral / bound_shape
};

struct RegimeReport {
    int regime = 0; // 1: alpha*beta > 1, 2: == 1, 3: in (0,1)
    std::vector<RegimeSweepPoint> points;
    double sup_ratio = 0.0;
    double growth = 0.0; // max ratio / min ratio across the sweep
};

// Sweep J against the regime's bound shape. exponent_shift perturbs the
// regime-1 exponent (the sharpness probe); sweeps must satisfy the side
// condition a^{1/alpha} <= c * b.
RegimeReport regime_bound_report(double alpha, double beta, double eta,
                                 const std::vector<std::pair<double, double>>& sweep,
                                 double exponent_shift = 0.0);

// Tensor midpoint quadrature (difference form, resolution cells per axis)
// of the 4-fold integral of (|s-t|^{1/2} + |x-y|)^{-gamma/2} over [0,1]^4.
// Stabilizes in resolution for gamma < 6, grows without bound for
// gamma >= 6.
double anisotropic_energy(double gamma_exp, int resolution);

} // namespace stringlab

#endif
