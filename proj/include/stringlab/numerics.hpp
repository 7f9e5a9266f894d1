#ifndef STRINGLAB_NUMERICS_HPP
#define STRINGLAB_NUMERICS_HPP

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

namespace stringlab {

// Gauss-Legendre nodes and weights on [-1, 1]. Tables are cached per n.
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

const GaussRule& gauss_legendre(int n);

// Integrate f over [a, b] with an n-point Gauss-Legendre rule.
double integrate_gl(const std::function<double(double)>& f, double a, double b, int n);

// Composite rule over consecutive panels [b0,b1], [b1,b2], ...
double integrate_panels(const std::function<double(double)>& f,
                        std::span<const double> breakpoints, int n_per_panel);

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_stderr = 0.0;
};

// Ordinary least squares of y against x.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

std::uint64_t splitmix64(std::uint64_t& state);

// Collapse (base, a, b) into one well-mixed stream seed. Streams for
// distinct (a, b) are independent for all practical purposes.
std::uint64_t mix_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0);

// Deterministic N(0,1) stream: mt19937_64 + polar Box-Muller. Same seed,
// same binary -> bitwise identical draws.
class GaussianStream {
  public:
    explicit GaussianStream(std::uint64_t seed) : eng_(seed) {}
    double next();
    double uniform01(); // in (0, 1)

  private:
    std::mt19937_64 eng_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace stringlab

#endif
