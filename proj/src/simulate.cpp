#include "stringlab/simulate.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "stringlab/numerics.hpp"

namespace stringlab {

void GridSpec::validate() const {
    if (n_t < 2 || n_x < 2)
        throw std::invalid_argument("GridSpec: n_t and n_x must be >= 2");
    if (!(t_min >= 0.0) || !(t_min < t_max))
        throw std::invalid_argument("GridSpec: need 0 <= t_min < t_max");
    if (!(x_min < x_max))
        throw std::invalid_argument("GridSpec: need x_min < x_max");
    if (n_nodes() > kNodeBudget)
        throw std::invalid_argument("GridSpec: " + std::to_string(n_nodes()) +
                                    " nodes exceed the dense-factorization budget of " +
                                    std::to_string(kNodeBudget));
}

double GridSpec::t_at(int it) const {
    return t_min + (t_max - t_min) * (n_t > 1 ? static_cast<double>(it) / (n_t - 1) : 0.0);
}

double GridSpec::x_at(int ix) const {
    return x_min + (x_max - x_min) * (n_x > 1 ? static_cast<double>(ix) / (n_x - 1) : 0.0);
}

SpaceTimePoint GridSpec::node(std::size_t flat) const {
    const int it = static_cast<int>(flat / n_x);
    const int ix = static_cast<int>(flat % n_x);
    return {t_at(it), x_at(ix)};
}

Eigen::MatrixXd build_cov_matrix(const GridSpec& grid) {
    grid.validate();
    const std::size_t n = grid.n_nodes();
    std::vector<SpaceTimePoint> pts(n);
    std::vector<double> var(n);
    for (std::size_t i = 0; i < n; ++i) {
        pts[i] = grid.node(i);
        var[i] = point_variance(pts[i]);
    }
    Eigen::MatrixXd cov(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        cov(i, i) = var[i];
        for (std::size_t j = i + 1; j < n; ++j) {
            const double c = 0.5 * (var[i] + var[j] - increment_variance(pts[i], pts[j]));
            cov(i, j) = c;
            cov(j, i) = c;
        }
    }
    return cov;
}

CovFactor::CovFactor(Eigen::MatrixXd cov) {
    n_ = static_cast<std::size_t>(cov.rows());
    // Hold out exactly-degenerate nodes (the pinned origin has variance 0).
    for (std::size_t i = 0; i < n_; ++i)
        if (cov(i, i) > 0.0) live_.push_back(i);
    Eigen::MatrixXd sub(live_.size(), live_.size());
    for (std::size_t a = 0; a < live_.size(); ++a)
        for (std::size_t b = 0; b < live_.size(); ++b)
            sub(a, b) = cov(live_[a], live_[b]);
    const double mean_diag = live_.empty() ? 0.0 : sub.diagonal().mean();

    double lambda = 0.0;
    for (int attempt = 0; attempt <= 7; ++attempt) {
        Eigen::MatrixXd work = sub;
        if (lambda > 0.0) work.diagonal().array() += lambda * mean_diag;
        Eigen::LLT<Eigen::MatrixXd> llt(work);
        if (llt.info() == Eigen::Success) {
            lower_ = llt.matrixL();
            jitter_used_ = lambda * mean_diag;
            return;
        }
        lambda = (lambda == 0.0) ? 1e-12 : lambda * 10.0;
        if (lambda > 1e-6) break;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sub, Eigen::EigenvaluesOnly);
    throw std::runtime_error(
        "CovFactor: factorization failed even at max jitter; smallest eigenvalue = " +
        std::to_string(es.eigenvalues().minCoeff()));
}

Eigen::VectorXd CovFactor::draw(GaussianStream& stream) const {
    Eigen::VectorXd z(live_.size());
    for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = stream.next();
    Eigen::VectorXd sub = lower_ * z;
    Eigen::VectorXd full = Eigen::VectorXd::Zero(n_);
    for (std::size_t a = 0; a < live_.size(); ++a) full(live_[a]) = sub(a);
    return full;
}

std::uint64_t replica_seed(std::uint64_t base_seed, int k) {
    return mix_seed(base_seed, 0x7265706cULL, static_cast<std::uint64_t>(k));
}

namespace {

FieldSample draw_field(const GridSpec& grid, int d, std::uint64_t seed, const CovFactor& factor) {
    FieldSample out;
    out.grid = grid;
    out.d = d;
    out.seed = seed;
    out.jitter_used = factor.jitter_used();
    const std::size_t n = grid.n_nodes();
    out.values.assign(n * d, 0.0);
    for (int j = 0; j < d; ++j) {
        GaussianStream stream(mix_seed(seed, 0x636f6d70ULL, static_cast<std::uint64_t>(j)));
        Eigen::VectorXd v = factor.draw(stream);
        for (std::size_t i = 0; i < n; ++i) out.values[i * d + j] = v(i);
    }
    return out;
}

} // namespace

FieldSample sample_field(const GridSpec& grid, int d, std::uint64_t seed) {
    if (d < 1) throw std::invalid_argument("sample_field: d must be >= 1");
    CovFactor factor(build_cov_matrix(grid));
    return draw_field(grid, d, seed, factor);
}

ReplicaBatch sample_replicas(const GridSpec& grid, int d, std::uint64_t base_seed, int count) {
    if (d < 1) throw std::invalid_argument("sample_replicas: d must be >= 1");
    if (count < 1) throw std::invalid_argument("sample_replicas: count must be >= 1");
    CovFactor factor(build_cov_matrix(grid));
    ReplicaBatch batch;
    batch.base_seed = base_seed;
    batch.samples.reserve(count);
    for (int k = 0; k < count; ++k)
        batch.samples.push_back(draw_field(grid, d, replica_seed(base_seed, k), factor));
    return batch;
}

namespace {

std::shared_ptr<const CovFactor> factor_path(const std::vector<SpaceTimePoint>& pts) {
    if (pts.size() < 2) throw std::invalid_argument("path sampler: need >= 2 nodes");
    if (pts.size() > kNodeBudget)
        throw std::invalid_argument("path sampler: node budget exceeded");
    const std::size_t n = pts.size();
    Eigen::MatrixXd cov(n, n);
    std::vector<double> var(n);
    for (std::size_t i = 0; i < n; ++i) var[i] = point_variance(pts[i]);
    for (std::size_t i = 0; i < n; ++i) {
        cov(i, i) = var[i];
        for (std::size_t j = i + 1; j < n; ++j) {
            const double c = 0.5 * (var[i] + var[j] - increment_variance(pts[i], pts[j]));
            cov(i, j) = c;
            cov(j, i) = c;
        }
    }
    return std::make_shared<CovFactor>(std::move(cov));
}

void require_increasing(const std::vector<double>& g, const char* what) {
    for (std::size_t i = 1; i < g.size(); ++i)
        if (!(g[i] > g[i - 1]))
            throw std::invalid_argument(std::string(what) + ": grid must be strictly increasing");
}

} // namespace

PathSampler PathSampler::time_slice(double x, std::vector<double> t_grid) {
    require_increasing(t_grid, "time slice");
    if (!t_grid.empty() && t_grid.front() < 0.0)
        throw std::invalid_argument("time slice: times must be >= 0");
    std::vector<SpaceTimePoint> pts(t_grid.size());
    for (std::size_t i = 0; i < t_grid.size(); ++i) pts[i] = {t_grid[i], x};
    PathSampler s;
    s.coords_ = std::move(t_grid);
    s.fixed_ = x;
    s.along_time_ = true;
    s.factor_ = factor_path(pts);
    return s;
}

PathSampler PathSampler::space_slice(double t, std::vector<double> x_grid) {
    require_increasing(x_grid, "space slice");
    if (t < 0.0) throw std::invalid_argument("space slice: t must be >= 0");
    std::vector<SpaceTimePoint> pts(x_grid.size());
    for (std::size_t i = 0; i < x_grid.size(); ++i) pts[i] = {t, x_grid[i]};
    PathSampler s;
    s.coords_ = std::move(x_grid);
    s.fixed_ = t;
    s.along_time_ = false;
    s.factor_ = factor_path(pts);
    return s;
}

PathSample PathSampler::draw(std::uint64_t seed) const {
    GaussianStream stream(mix_seed(seed, 0x70617468ULL, 0));
    Eigen::VectorXd v = factor_->draw(stream);
    PathSample out;
    out.coords = coords_;
    out.fixed = fixed_;
    out.along_time = along_time_;
    out.seed = seed;
    out.jitter_used = factor_->jitter_used();
    out.values.assign(v.data(), v.data() + v.size());
    return out;
}

PathSample sample_time_slice(double x, const std::vector<double>& t_grid, std::uint64_t seed) {
    return PathSampler::time_slice(x, t_grid).draw(seed);
}

PathSample sample_space_slice(double t, const std::vector<double>& x_grid, std::uint64_t seed) {
    return PathSampler::space_slice(t, x_grid).draw(seed);
}

} // namespace stringlab
