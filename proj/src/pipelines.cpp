#include "stringlab/pipelines.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "stringlab/fieldio.hpp"
#include "stringlab/numerics.hpp"

namespace stringlab {

std::string to_string(EstimateSet set) {
    switch (set) {
        case EstimateSet::Range: return "range";
        case EstimateSet::GraphTime: return "graph-time";
        case EstimateSet::GraphSpace: return "graph-space";
        case EstimateSet::Level: return "level";
        case EstimateSet::DoubleI: return "double-i";
        case EstimateSet::DoubleII: return "double-ii";
    }
    return "?";
}

EstimateSet estimate_set_from_string(const std::string& name) {
    if (name == "range") return EstimateSet::Range;
    if (name == "graph-time") return EstimateSet::GraphTime;
    if (name == "graph-space") return EstimateSet::GraphSpace;
    if (name == "level") return EstimateSet::Level;
    if (name == "double-i") return EstimateSet::DoubleI;
    if (name == "double-ii") return EstimateSet::DoubleII;
    throw std::invalid_argument("unknown estimate set: " + name);
}

namespace {

std::optional<double> pipeline_target(const EstimateConfig& c) {
    switch (c.set) {
        case EstimateSet::Range: return range_dimension(c.d);
        case EstimateSet::GraphTime: return kTimeSliceGraphDim;
        case EstimateSet::GraphSpace: return kSpaceSliceGraphDim;
        case EstimateSet::Level: return level_set_dimension(c.d);
        case EstimateSet::DoubleI: return double_time_i_dimension(c.d);
        case EstimateSet::DoubleII: return double_time_ii_dimension(c.d);
    }
    return std::nullopt;
}

double default_tolerance(EstimateSet set) {
    switch (set) {
        case EstimateSet::GraphTime:
        case EstimateSet::GraphSpace: return 0.1;
        case EstimateSet::Level: return 0.25;
        case EstimateSet::Range: return 0.15;
        default: return 0.5;
    }
}

struct CloudOutcome {
    CellCloud cloud;
    std::string note;
    bool usable = true;
};

class ReplicaSource {
  public:
    ReplicaSource(const EstimateConfig& c) : cfg_(c) {
        if (c.set == EstimateSet::Range || c.set == EstimateSet::Level ||
            c.set == EstimateSet::DoubleI || c.set == EstimateSet::DoubleII) {
            factor_.emplace(build_cov_matrix(c.grid));
        } else if (c.set == EstimateSet::GraphSpace) {
            std::vector<double> xg(c.path_nodes);
            for (int i = 0; i < c.path_nodes; ++i)
                xg[i] = static_cast<double>(i) / (c.path_nodes - 1);
            path_.emplace(PathSampler::space_slice(1.0, std::move(xg)));
        } else {
            std::vector<double> tg(c.path_nodes);
            for (int i = 0; i < c.path_nodes; ++i)
                tg[i] = 1.0 + static_cast<double>(i) / (c.path_nodes - 1);
            path_.emplace(PathSampler::time_slice(0.0, std::move(tg)));
        }
    }

    CloudOutcome make_cloud(int k) {
        const std::uint64_t seed = replica_seed(cfg_.seed, k);
        CloudOutcome out;
        switch (cfg_.set) {
            case EstimateSet::GraphSpace:
            case EstimateSet::GraphTime: {
                PathSample p = path_->draw(seed);
                out.cloud = graph_cloud(p, cfg_.stretch, std::ldexp(1.0, -(cfg_.k_max + 3)));
                break;
            }
            default: {
                FieldSample f = draw(seed);
                if (cfg_.set == EstimateSet::Range) {
                    out.cloud = range_cloud(f);
                } else if (cfg_.set == EstimateSet::Level) {
                    out.cloud = level_crossing_cells(f, std::vector<double>(cfg_.d, 0.0));
                    if (out.cloud.size() < cfg_.min_cells) {
                        out.usable = false;
                        out.note = "level set below min_cells";
                    }
                } else if (cfg_.set == EstimateSet::DoubleI) {
                    out.cloud = double_time_pairs(f, cfg_.eps, cfg_.gap);
                    if (out.cloud.size() == 0) { out.usable = false; out.note = "no double times"; }
                } else {
                    out.cloud = equal_time_doubles(f, cfg_.eps, cfg_.gap);
                    if (out.cloud.size() == 0) { out.usable = false; out.note = "no double points"; }
                }
            }
        }
        return out;
    }

  private:
    FieldSample draw(std::uint64_t seed) {
        // factor reused across replicas
        FieldSample out;
        out.grid = cfg_.grid;
        out.d = cfg_.d;
        out.seed = seed;
        out.jitter_used = factor_->jitter_used();
        const std::size_t n = cfg_.grid.n_nodes();
        out.values.assign(n * cfg_.d, 0.0);
        for (int j = 0; j < cfg_.d; ++j) {
            GaussianStream stream(mix_seed(seed, 0x636f6d70ULL, static_cast<std::uint64_t>(j)));
            Eigen::VectorXd v = factor_->draw(stream);
            for (std::size_t i = 0; i < n; ++i) out.values[i * cfg_.d + j] = v(i);
        }
        return out;
    }

    const EstimateConfig& cfg_;
    std::optional<CovFactor> factor_;
    std::optional<PathSampler> path_;
};

} // namespace

GridSpec default_double_grid() { return GridSpec{0.2, 1.2, 0.0, 1.0, 48, 48}; }

EstimateReport run_estimate(const EstimateConfig& config) {
    if (config.replicas < 1) throw std::invalid_argument("run_estimate: replicas must be >= 1");
    if (config.k_max - config.k_min + 1 < 4)
        throw std::invalid_argument("run_estimate: need >= 4 octave scales");
    EstimateReport rep;
    rep.config = config;
    rep.target = pipeline_target(config);
    rep.tolerance = config.tolerance.value_or(default_tolerance(config.set));
    const std::vector<double> scales = octave_scales(config.k_min, config.k_max);

    ReplicaSource source(config);
    std::vector<double> slopes;
    for (int k = 0; k < config.max_draws && rep.estimable < config.replicas; ++k) {
        ReplicaRecord rec;
        rec.replica = k;
        rec.seed = replica_seed(config.seed, k);
        CloudOutcome out = source.make_cloud(k);
        rec.set_size = out.cloud.size();
        if (out.usable) {
            try {
                DimEstimate est = fit_box_dimension(out.cloud, scales);
                rec.scales = est.scales;
                rec.slope = est.slope;
                rec.stderr = est.stderr;
                rec.estimable = true;
                slopes.push_back(est.slope);
                ++rep.estimable;
            } catch (const std::exception& e) {
                rec.note = e.what();
            }
        } else {
            rec.note = out.note;
        }
        rep.records.push_back(std::move(rec));
    }
    if (!slopes.empty()) {
        double mean = 0.0;
        for (double s : slopes) mean += s;
        mean /= static_cast<double>(slopes.size());
        double var = 0.0;
        for (double s : slopes) var += (s - mean) * (s - mean);
        rep.mean_slope = mean;
        rep.stderr_of_mean =
            slopes.size() > 1 ? std::sqrt(var / (slopes.size() - 1) / slopes.size()) : 0.0;
    }
    rep.pass = rep.target && rep.estimable >= std::min(config.replicas, 20) &&
               std::abs(rep.mean_slope - *rep.target) <= rep.tolerance;
    return rep;
}

std::string report_jsonl(const EstimateReport& rep, const std::string& config_digest) {
    std::ostringstream os;
    for (const auto& r : rep.records) {
        nlohmann::json j;
        j["replica"] = r.replica;
        j["seed"] = r.seed;
        j["set_size"] = r.set_size;
        j["estimable"] = r.estimable;
        if (r.estimable) {
            nlohmann::json sc = nlohmann::json::array();
            for (auto [rr, nn] : r.scales) sc.push_back({rr, nn});
            j["scales"] = sc;
            j["slope"] = r.slope;
            j["stderr"] = r.stderr;
        }
        if (!r.note.empty()) j["note"] = r.note;
        os << j.dump() << "\n";
    }
    nlohmann::json agg;
    agg["aggregate"] = true;
    agg["set"] = to_string(rep.config.set);
    agg["d"] = rep.config.d;
    agg["base_seed"] = rep.config.seed;
    agg["config_digest"] = config_digest;
    agg["draws"] = rep.records.size();
    agg["estimable"] = rep.estimable;
    agg["mean_slope"] = rep.mean_slope;
    agg["stderr"] = rep.stderr_of_mean;
    if (rep.target) agg["target"] = *rep.target;
    else agg["target"] = "EMPTY";
    agg["tolerance"] = rep.tolerance;
    agg["pass"] = rep.pass;
    os << agg.dump() << "\n";
    return os.str();
}

std::string kernel_table_csv(const std::vector<double>& xs) {
    std::ostringstream os;
    os << "x,H,F,h_tail\n";
    for (double x : xs)
        os << format_double(x) << ',' << format_double(profile_h(x)) << ','
           << format_double(profile_f(x)) << ',' << format_double(profile_h_tail(std::abs(x)))
           << "\n";
    return os.str();
}

namespace {
std::string dim_cell(const DimValue& v) {
    if (!v) return "EMPTY";
    return format_double(*v);
}
} // namespace

std::string dims_table_csv(int d_max) {
    std::ostringstream os;
    os << "d,range,graph,level,double_I,double_II\n";
    for (int d = 1; d <= d_max; ++d)
        os << d << ',' << dim_cell(range_dimension(d)) << ',' << dim_cell(graph_dimension(d))
           << ',' << dim_cell(level_set_dimension(d)) << ',' << dim_cell(double_time_i_dimension(d))
           << ',' << dim_cell(double_time_ii_dimension(d)) << "\n";
    return os.str();
}

std::vector<std::pair<std::string, bool>> kernel_self_check() {
    std::vector<std::pair<std::string, bool>> checks;
    KernelConfig quad;
    quad.mode = EvalMode::Quadrature;

    bool closed_vs_quad = true;
    for (double x : {0.0, 0.5, 1.0, 2.0, 5.0, 10.0})
        closed_vs_quad = closed_vs_quad && std::abs(profile_f(x) - profile_f(x, quad)) <= 1e-8;
    checks.emplace_back("profile F closed-form vs quadrature (1e-8)", closed_vs_quad);

    bool lower_bound = true;
    for (int i = 0; i <= 2000; ++i)
        lower_bound = lower_bound && profile_f(20.0 * i / 2000.0) >= 0.3989422804014327;
    checks.emplace_back("F >= (2pi)^(-1/2) on [0,20]", lower_bound);

    bool tail_mono = true;
    double prev = profile_h_tail(0.0);
    for (int i = 1; i <= 1000; ++i) {
        const double v = profile_h_tail(10.0 * i / 1000.0);
        tail_mono = tail_mono && v <= prev && v >= 0.0;
        prev = v;
    }
    checks.emplace_back("h_tail nonincreasing on [0,10]", tail_mono);
    checks.emplace_back("h_tail(10) <= 1e-6", profile_h_tail(10.0) <= 1e-6);

    bool scaling = true;
    GaussianStream g(12);
    for (int i = 0; i < 100; ++i) {
        SpaceTimePoint p{g.uniform01(), 2.0 * g.uniform01() - 1.0};
        SpaceTimePoint q{g.uniform01(), 2.0 * g.uniform01() - 1.0};
        for (double c : {0.5, 2.0, 3.0}) {
            const double gap = scaling_gap(p, q, c);
            scaling = scaling && gap <= 1e-12 * std::max(1.0, c * c * increment_variance(p, q));
        }
    }
    checks.emplace_back("scaling identity (1e-12 relative)", scaling);
    return checks;
}

} // namespace stringlab
