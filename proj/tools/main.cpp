#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <Eigen/Core>

#include "stringlab/fieldio.hpp"
#include "stringlab/fractal.hpp"
#include "stringlab/occupation.hpp"
#include "stringlab/pipelines.hpp"
#include "stringlab/simulate.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitCheck = 4;

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string digest_hex(const std::string& s) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(fnv1a(s)));
    return buf;
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file " + out_path);
    out << text;
}

std::string provenance_line(const std::string& digest, std::optional<std::uint64_t> seed) {
    std::string line = "# config_digest=" + digest;
    if (seed) line += ",seed=" + std::to_string(*seed);
    return line + "\n";
}

int run_self_check() {
    auto checks = stringlab::kernel_self_check();
    bool ok = true;
    for (const auto& [name, pass] : checks) {
        std::cerr << (pass ? "[ ok ] " : "[FAIL] ") << name << "\n";
        ok = ok && pass;
    }
    return ok ? 0 : kExitCheck;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"stringlab: stationary pinned string kernel, exact simulation and fractal analysis"};
    app.set_config("--config", "", "structured text config file (flags override)");
    app.require_subcommand(0, 1);

    int threads = 0;
    if (const char* env = std::getenv("STRINGLAB_THREADS")) threads = std::atoi(env);
    app.add_option("--threads", threads, "worker thread cap (default from STRINGLAB_THREADS)");
    bool self_check = false;
    app.add_flag("--self-check", self_check, "run the kernel identity suite before the command");

    // ---- kernel ----
    auto* cmd_kernel = app.add_subcommand("kernel", "tabulate x, H(x), F(x), h_tail(x)");
    double kx_min = 0.0, kx_max = 10.0, kx_step = 0.5;
    std::string kernel_out;
    cmd_kernel->add_option("--x-min", kx_min);
    cmd_kernel->add_option("--x-max", kx_max);
    cmd_kernel->add_option("--step", kx_step)->check(CLI::PositiveNumber);
    cmd_kernel->add_option("-o,--out", kernel_out, "output CSV path (default stdout)");

    // ---- simulate ----
    auto* cmd_sim = app.add_subcommand("simulate", "draw an exact field sample and dump CSV");
    stringlab::GridSpec sim_grid;
    int sim_d = 1;
    std::uint64_t sim_seed = 1;
    std::string sim_out = "field.csv";
    cmd_sim->add_option("--t-min", sim_grid.t_min);
    cmd_sim->add_option("--t-max", sim_grid.t_max);
    cmd_sim->add_option("--x-min", sim_grid.x_min);
    cmd_sim->add_option("--x-max", sim_grid.x_max);
    cmd_sim->add_option("--n-t", sim_grid.n_t);
    cmd_sim->add_option("--n-x", sim_grid.n_x);
    cmd_sim->add_option("--d", sim_d)->check(CLI::PositiveNumber);
    cmd_sim->add_option("--seed", sim_seed);
    cmd_sim->add_option("-o,--out", sim_out, "output CSV path");

    // ---- dims ----
    auto* cmd_dims = app.add_subcommand("dims", "theoretical dimension table");
    int dims_max = 13;
    std::string dims_out;
    cmd_dims->add_option("--d-max", dims_max)->check(CLI::PositiveNumber);
    cmd_dims->add_option("-o,--out", dims_out);

    // ---- estimate ----
    auto* cmd_est = app.add_subcommand("estimate", "simulate -> extract -> count -> fit report");
    stringlab::EstimateConfig est;
    std::string est_set = "level";
    std::string est_out;
    double est_tolerance = -1.0;
    cmd_est->add_option("--set", est_set,
                        "range|graph-time|graph-space|level|double-i|double-ii");
    cmd_est->add_option("--d", est.d)->check(CLI::PositiveNumber);
    cmd_est->add_option("--seed", est.seed);
    cmd_est->add_option("--replicas", est.replicas)->check(CLI::PositiveNumber);
    cmd_est->add_option("--max-draws", est.max_draws)->check(CLI::PositiveNumber);
    cmd_est->add_option("--t-min", est.grid.t_min);
    cmd_est->add_option("--t-max", est.grid.t_max);
    cmd_est->add_option("--x-min", est.grid.x_min);
    cmd_est->add_option("--x-max", est.grid.x_max);
    cmd_est->add_option("--n-t", est.grid.n_t);
    cmd_est->add_option("--n-x", est.grid.n_x);
    cmd_est->add_option("--path-nodes", est.path_nodes);
    cmd_est->add_option("--stretch", est.stretch)->check(CLI::PositiveNumber);
    cmd_est->add_option("--min-cells", est.min_cells);
    cmd_est->add_option("--eps", est.eps);
    cmd_est->add_option("--gap", est.gap);
    cmd_est->add_option("--k-min", est.k_min);
    cmd_est->add_option("--k-max", est.k_max);
    cmd_est->add_option("--tolerance", est_tolerance);
    cmd_est->add_option("-o,--out", est_out, "output JSON-lines path (default stdout)");

    // ---- lnd-check ----
    auto* cmd_lnd = app.add_subcommand("lnd-check", "local-nondeterminism ratio scan");
    std::string lnd_lemma = "point";
    stringlab::LndConfig lnd;
    bool lnd_no_h0 = false;
    double lnd_h0 = 0.01;
    std::string lnd_out;
    cmd_lnd->add_option("--lemma", lnd_lemma, "point|times|positions");
    cmd_lnd->add_option("--epsilon", lnd.epsilon);
    cmd_lnd->add_option("--gap", lnd.min_gap, "separation L");
    cmd_lnd->add_option("--h0", lnd_h0, "time-proximity cap for the positions lemma");
    cmd_lnd->add_flag("--no-h0", lnd_no_h0, "remove the |s-t| restriction (necessity probe)");
    cmd_lnd->add_option("--samples", lnd.samples)->check(CLI::PositiveNumber);
    cmd_lnd->add_option("--seed", lnd.seed);
    cmd_lnd->add_option("-o,--out", lnd_out);

    // ---- localtime ----
    auto* cmd_lt = app.add_subcommand("localtime", "Gaussian-kernel occupation density estimate");
    std::string lt_field;
    std::vector<double> lt_u{0.0};
    double lt_n = 1000.0;
    std::vector<double> lt_region;
    std::string lt_out;
    cmd_lt->add_option("--field", lt_field, "field CSV produced by `simulate`")->required();
    cmd_lt->add_option("--u", lt_u, "level (one value per component)");
    cmd_lt->add_option("--n", lt_n, "smoothing parameter")->check(CLI::PositiveNumber);
    cmd_lt->add_option("--region", lt_region, "t_lo t_hi x_lo x_hi (default whole grid)")
        ->expected(4);
    cmd_lt->add_option("-o,--out", lt_out);

    // ---- energy ----
    auto* cmd_energy = app.add_subcommand("energy", "anisotropic energy integral sweep");
    std::vector<double> en_gamma{4.0, 8.0};
    std::vector<int> en_res{32, 64, 128};
    std::string en_out;
    cmd_energy->add_option("--gamma", en_gamma);
    cmd_energy->add_option("--resolution", en_res);
    cmd_energy->add_option("-o,--out", en_out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    if (threads > 0) Eigen::setNbThreads(threads);

    try {
        if (self_check) {
            const int rc = run_self_check();
            if (rc != 0) return rc;
        }
        if (app.get_subcommands().empty()) {
            if (!self_check) std::cout << app.help();
            return 0;
        }
        const std::string digest = digest_hex(app.config_to_str(true, false));

        if (cmd_kernel->parsed()) {
            std::vector<double> xs;
            for (double x = kx_min; x <= kx_max + 1e-12; x += kx_step) xs.push_back(x);
            emit(provenance_line(digest, std::nullopt) + stringlab::kernel_table_csv(xs),
                 kernel_out);
        } else if (cmd_sim->parsed()) {
            stringlab::FieldSample f = stringlab::sample_field(sim_grid, sim_d, sim_seed);
            stringlab::write_field_csv(f, sim_out);
            std::cerr << "wrote " << sim_out << " (+.meta), jitter_used=" << f.jitter_used
                      << ", digest=" << digest << "\n";
        } else if (cmd_dims->parsed()) {
            emit(provenance_line(digest, std::nullopt) + stringlab::dims_table_csv(dims_max),
                 dims_out);
        } else if (cmd_est->parsed()) {
            est.set = stringlab::estimate_set_from_string(est_set);
            if ((est.set == stringlab::EstimateSet::DoubleI ||
                 est.set == stringlab::EstimateSet::DoubleII) &&
                cmd_est->count("--n-t") == 0 && cmd_est->count("--n-x") == 0 &&
                cmd_est->count("--t-min") == 0 && cmd_est->count("--t-max") == 0 &&
                cmd_est->count("--x-min") == 0 && cmd_est->count("--x-max") == 0)
                est.grid = stringlab::default_double_grid();
            if (est_tolerance >= 0.0) est.tolerance = est_tolerance;
            stringlab::EstimateReport rep = stringlab::run_estimate(est);
            emit(stringlab::report_jsonl(rep, digest), est_out);
            if (!rep.pass && rep.target) return kExitCheck;
        } else if (cmd_lnd->parsed()) {
            if (lnd_lemma == "point") lnd.lemma = stringlab::LndLemma::PointGivenPoint;
            else if (lnd_lemma == "times") lnd.lemma = stringlab::LndLemma::SeparatedTimes;
            else if (lnd_lemma == "positions") lnd.lemma = stringlab::LndLemma::SeparatedPositions;
            else throw std::invalid_argument("unknown lemma " + lnd_lemma);
            if (lnd.lemma == stringlab::LndLemma::SeparatedPositions && !lnd_no_h0)
                lnd.h0 = lnd_h0;
            else
                lnd.h0.reset();
            stringlab::LndScanResult res = stringlab::lnd_scan(lnd);
            std::ostringstream os;
            os << provenance_line(digest, lnd.seed);
            os << "lemma,min_ratio,samples,t1,x1,t2,x2,s1,y1,s2,y2\n";
            os << lnd_lemma << ',' << stringlab::format_double(res.min_ratio) << ','
               << res.samples_used;
            for (const auto& p : res.argmin)
                os << ',' << stringlab::format_double(p.t) << ','
                   << stringlab::format_double(p.x);
            os << "\n";
            emit(os.str(), lnd_out);
        } else if (cmd_lt->parsed()) {
            stringlab::FieldSample f = stringlab::read_field_csv(lt_field);
            stringlab::Region region = stringlab::Region::whole(f.grid);
            if (!lt_region.empty())
                region = {lt_region[0], lt_region[1], lt_region[2], lt_region[3]};
            stringlab::LocalTimeEstimate estv = stringlab::local_time_at(f, region, lt_u, lt_n);
            std::ostringstream os;
            os << provenance_line(digest, f.seed);
            os << "u,n,estimate\n";
            os << stringlab::format_double(lt_u[0]);
            for (std::size_t i = 1; i < lt_u.size(); ++i)
                os << ';' << stringlab::format_double(lt_u[i]);
            os << ',' << stringlab::format_double(lt_n) << ','
               << stringlab::format_double(estv.value) << "\n";
            emit(os.str(), lt_out);
        } else if (cmd_energy->parsed()) {
            std::ostringstream os;
            os << provenance_line(digest, std::nullopt);
            os << "gamma,resolution,value\n";
            for (double g : en_gamma)
                for (int r : en_res)
                    os << stringlab::format_double(g) << ',' << r << ','
                       << stringlab::format_double(stringlab::anisotropic_energy(g, r)) << "\n";
            emit(os.str(), en_out);
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return kExitNumeric;
    }
    return 0;
}
