#ifndef STRINGLAB_SIMULATE_HPP
#define STRINGLAB_SIMULATE_HPP

#include <cstdint>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "stringlab/kernel.hpp"
#include "stringlab/numerics.hpp"

namespace stringlab {

inline constexpr std::size_t kNodeBudget = 10000;

// Rectangular space-time grid, nodes enumerated t-major then x.
struct GridSpec {
    double t_min = 0.0, t_max = 1.0;
    double x_min = 0.0, x_max = 1.0;
    int n_t = 2, n_x = 2;

    void validate() const;
    std::size_t n_nodes() const { return static_cast<std::size_t>(n_t) * n_x; }
    double t_at(int it) const;
    double x_at(int ix) const;
    double t_step() const { return n_t > 1 ? (t_max - t_min) / (n_t - 1) : 0.0; }
    double x_step() const { return n_x > 1 ? (x_max - x_min) / (n_x - 1) : 0.0; }
    SpaceTimePoint node(std::size_t flat) const;
};

// d-component Gaussian field values on a grid. values[(it*n_x+ix)*d + j].
struct FieldSample {
    GridSpec grid;
    int d = 1;
    std::vector<double> values;
    std::uint64_t seed = 0;
    double jitter_used = 0.0;

    double value(int it, int ix, int j) const {
        return values[(static_cast<std::size_t>(it) * grid.n_x + ix) * d + j];
    }
};

struct ReplicaBatch {
    std::uint64_t base_seed = 0;
    std::vector<FieldSample> samples;
};

// 1-D exact path along a time or space line.
struct PathSample {
    std::vector<double> coords; // the varying coordinate
    std::vector<double> values;
    double fixed = 0.0; // the frozen coordinate
    bool along_time = true;
    std::uint64_t seed = 0;
    double jitter_used = 0.0;
};

// Dense pinned covariance of the grid nodes; entry (i, j) is
// pinned_covariance(node_i, node_j). Throws above the node budget.
Eigen::MatrixXd build_cov_matrix(const GridSpec& grid);

// Covariance factorization with escalating-jitter fallback, reusable
// across replicas. Nodes with zero variance (the pinned origin) are held
// out of the factor and their samples forced to exact zero.
class CovFactor {
  public:
    explicit CovFactor(Eigen::MatrixXd cov);

    std::size_t size() const { return n_; }
    double jitter_used() const { return jitter_used_; }

    // One zero-mean draw with the factored covariance; the stream must
    // yield i.i.d. N(0,1).
    Eigen::VectorXd draw(GaussianStream& stream) const;

  private:
    std::size_t n_ = 0;
    std::vector<std::size_t> live_; // indices with positive variance
    Eigen::MatrixXd lower_;
    double jitter_used_ = 0.0;
};

// Exact draw of the d-component pinned string on the grid. Bitwise
// deterministic in (grid, d, seed).
FieldSample sample_field(const GridSpec& grid, int d, std::uint64_t seed);

// Replica k is sample_field(grid, d, derive(base_seed, k)); the covariance
// is factored once for the batch.
ReplicaBatch sample_replicas(const GridSpec& grid, int d, std::uint64_t base_seed, int count);

std::uint64_t replica_seed(std::uint64_t base_seed, int k);

// Reusable exact sampler for a fixed 1-D slice; the covariance is
// factored once and shared by all draws.
class PathSampler {
  public:
    static PathSampler time_slice(double x, std::vector<double> t_grid);
    static PathSampler space_slice(double t, std::vector<double> x_grid);

    PathSample draw(std::uint64_t seed) const;
    double jitter_used() const { return factor_->jitter_used(); }

  private:
    PathSampler() = default;
    std::vector<double> coords_;
    double fixed_ = 0.0;
    bool along_time_ = true;
    std::shared_ptr<const CovFactor> factor_;
};

// Exact 1-D paths restricted from the pinned covariance.
PathSample sample_time_slice(double x, const std::vector<double>& t_grid, std::uint64_t seed);
PathSample sample_space_slice(double t, const std::vector<double>& x_grid, std::uint64_t seed);

} // namespace stringlab

#endif
