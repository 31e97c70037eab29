// Command-line interface for the tempered Mittag-Leffler Hawkes toolkit:
// special-function evaluation, kernel tables, expected-intensity curves,
// path simulation, Monte-Carlo counting distributions, and the named
// figure presets.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "hptml/experiments.hpp"
#include "hptml/intensity.hpp"
#include "hptml/kernels.hpp"
#include "hptml/laplace.hpp"
#include "hptml/simulation.hpp"
#include "hptml/special_functions.hpp"
#include "hptml/version.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNumeric = 1;
constexpr int kExitUsage = 2;

struct CommonParams {
    double lambda0 = 1.0;
    double alpha = 0.0;
    double beta = 1.0;
    double nu = 0.0;
    double gamma = 1.0;
    std::string kernel = "tml";  // tml | ml | exp | none
};

hptml::HawkesParams to_params(const CommonParams& c) {
    return hptml::HawkesParams{c.lambda0, c.alpha, c.beta, c.nu, c.gamma};
}

hptml::KernelSpec to_kernel(const CommonParams& c) {
    if (c.kernel == "tml") return hptml::KernelSpec::tempered_ml(c.beta, c.nu, c.gamma);
    if (c.kernel == "ml") return hptml::KernelSpec::mittag_leffler(c.beta, c.gamma);
    if (c.kernel == "exp") return hptml::KernelSpec::exponential(c.gamma);
    if (c.kernel == "none") return hptml::KernelSpec::none();
    throw std::invalid_argument("kernel must be one of tml|ml|exp|none (got '" + c.kernel + "')");
}

void add_param_options(CLI::App* cmd, CommonParams& c, bool with_kernel = true) {
    cmd->add_option("--lambda0", c.lambda0, "baseline intensity");
    cmd->add_option("--alpha", c.alpha, "jump size / branching ratio");
    cmd->add_option("--beta", c.beta, "fractional index in (0,1]");
    cmd->add_option("--nu", c.nu, "tempering parameter >= 0");
    cmd->add_option("--gamma", c.gamma, "time-scale factor > 0");
    if (with_kernel) cmd->add_option("--kernel", c.kernel, "kernel variant: tml|ml|exp|none");
}

/// flags > config file > built-in defaults: any option the user did not pass
/// on the command line is looked up in the JSON config document.
void apply_config(const CLI::App* cmd, const std::string& path, CommonParams& c,
                  std::uint64_t* runs, std::uint64_t* seed, double* t, std::string* format) {
    if (path.empty()) return;
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config file not readable: " + path);
    hptml::json j;
    in >> j;
    auto take = [&](const char* flag, auto* target, const char* key) {
        if (target == nullptr) return;
        const CLI::Option* opt = cmd->get_option_no_throw(flag);
        const bool passed = opt != nullptr && opt->count() > 0;
        if (!passed && j.contains(key)) *target = j.at(key).get<std::decay_t<decltype(*target)>>();
    };
    if (j.contains("params")) {
        const hptml::json& p = j["params"];
        auto take_param = [&](const char* flag, double* target, const char* key) {
            const CLI::Option* opt = cmd->get_option_no_throw(flag);
            const bool passed = opt != nullptr && opt->count() > 0;
            if (!passed && p.contains(key)) *target = p.at(key).get<double>();
        };
        take_param("--lambda0", &c.lambda0, "lambda0");
        take_param("--alpha", &c.alpha, "alpha");
        take_param("--beta", &c.beta, "beta");
        take_param("--nu", &c.nu, "nu");
        take_param("--gamma", &c.gamma, "gamma");
    }
    take("--kernel", &c.kernel, "kernel");
    take("--runs", runs, "n_runs");
    take("--seed", seed, "master_seed");
    take("--t", t, "t");
    take("--format", format, "format");
}

std::ostream& open_output(const std::string& path, std::ofstream& file) {
    if (path.empty()) return std::cout;
    file.open(path, std::ios::binary);  // LF line endings on every platform
    if (!file) throw std::invalid_argument("cannot open output file: " + path);
    return file;
}

hptml::CountHistogram read_histogram_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open histogram file: " + path);
    hptml::CountHistogram h;
    std::string first;
    while (std::getline(in, first)) {
        if (!first.empty() && first[0] != '#') break;
        if (first.rfind("# t=", 0) == 0) h.t = std::stod(first.substr(4));
        if (first.rfind("# n_runs=", 0) == 0) h.n_runs = std::stoull(first.substr(9));
    }
    if (first == "n,frequency,probability") {
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            std::istringstream ss(line);
            std::string n_str, f_str;
            std::getline(ss, n_str, ',');
            std::getline(ss, f_str, ',');
            h.counts[std::stoull(n_str)] = std::stoull(f_str);
        }
    } else if (!first.empty() && first[0] == '{') {
        // JSON document from `distribution --format json`
        std::string rest((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        const hptml::json j = hptml::json::parse(first + rest);
        const hptml::json& d = j.contains("data") ? j["data"] : j;
        h.t = d.at("t").get<double>();
        h.n_runs = d.at("n_runs").get<std::uint64_t>();
        for (const auto& row : d.at("counts"))
            h.counts[row.at("n").get<std::uint64_t>()] = row.at("frequency").get<std::uint64_t>();
    } else {
        throw std::invalid_argument("unrecognized histogram file format: " + path);
    }
    std::uint64_t total = 0;
    for (const auto& [n, c] : h.counts) total += c;
    if (h.n_runs == 0) h.n_runs = total;
    if (total != h.n_runs)
        throw std::invalid_argument("histogram frequencies do not sum to n_runs in " + path);
    return h;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hawkes process with tempered Mittag-Leffler kernel"};
    app.set_version_flag("--version", hptml::kVersion);
    app.require_subcommand(1);

    // --- ml-eval ---------------------------------------------------------
    double ml_a = 1.0, ml_b = 1.0, ml_c = 1.0, ml_z = 0.0, ml_tol = 1e-12;
    CLI::App* ml = app.add_subcommand("ml-eval", "evaluate the Mittag-Leffler function M_{a,b}^c(z)");
    ml->add_option("--a", ml_a, "first parameter > 0")->required();
    ml->add_option("--b", ml_b, "second parameter > 0")->required();
    ml->add_option("--c", ml_c, "Prabhakar parameter > 0 (default 1)");
    ml->add_option("--z", ml_z, "argument")->required();
    ml->add_option("--tol", ml_tol, "tolerance in [1e-15, 1e-6]");

    // --- kernel ----------------------------------------------------------
    CommonParams kp;
    double k_tmax = 10.0;
    std::size_t k_points = 200;
    std::string k_out;
    CLI::App* kn = app.add_subcommand("kernel", "tabulate kernel density and CDF as CSV");
    kn->add_option("--beta", kp.beta, "fractional index in (0,1]");
    kn->add_option("--nu", kp.nu, "tempering parameter >= 0");
    kn->add_option("--gamma", kp.gamma, "time-scale factor > 0");
    kn->add_option("--kernel", kp.kernel, "kernel variant: tml|ml|exp");
    kn->add_option("--tmax", k_tmax, "grid end");
    kn->add_option("--points", k_points, "grid size");
    kn->add_option("--out", k_out, "output file (default stdout)");

    // --- intensity -------------------------------------------------------
    CommonParams ip;
    double i_tmax = 15.0, i_step = 0.01;
    std::string i_out, i_config;
    CLI::App* in_cmd = app.add_subcommand("intensity",
                                          "expected intensity: analytic series vs numeric inversion");
    add_param_options(in_cmd, ip, false);
    in_cmd->add_option("--tmax", i_tmax, "grid end");
    in_cmd->add_option("--step", i_step, "grid step");
    in_cmd->add_option("--out", i_out, "output file (default stdout)");
    in_cmd->add_option("--config", i_config, "JSON config file (flags override)");

    // --- simulate --------------------------------------------------------
    CommonParams sp;
    double s_horizon = 10.0;
    std::uint64_t s_seed = 12345, s_rep = 0;
    std::string s_out, s_algorithm = "cluster", s_config;
    bool s_supercritical = false;
    CLI::App* sim = app.add_subcommand("simulate", "simulate one path; emits event times as CSV");
    add_param_options(sim, sp);
    sim->add_option("--horizon,--t", s_horizon, "time horizon T");
    sim->add_option("--seed", s_seed, "master seed");
    sim->add_option("--replication", s_rep, "replication index");
    sim->add_option("--algorithm", s_algorithm, "cluster|thinning");
    sim->add_flag("--allow-supercritical", s_supercritical, "permit alpha >= 1 (event cap applies)");
    sim->add_option("--out", s_out, "output file (default stdout)");
    sim->add_option("--config", s_config, "JSON config file (flags override)");

    // --- distribution ----------------------------------------------------
    CommonParams dp;
    double d_t = 10.0;
    std::uint64_t d_runs = 10000, d_seed = 12345;
    std::string d_out, d_format = "csv", d_algorithm = "cluster", d_config;
    CLI::App* dist = app.add_subcommand("distribution",
                                        "Monte-Carlo counting distribution P(N(t)=n)");
    add_param_options(dist, dp);
    dist->add_option("--t", d_t, "observation time");
    dist->add_option("--runs", d_runs, "number of replications (>= 100)");
    dist->add_option("--seed", d_seed, "master seed");
    dist->add_option("--format", d_format, "csv|json");
    dist->add_option("--algorithm", d_algorithm, "cluster|thinning");
    dist->add_option("--out", d_out, "output file (default stdout)");
    dist->add_option("--config", d_config, "JSON config file (flags override)");

    // --- preset ----------------------------------------------------------
    std::string p_name;
    std::uint64_t p_runs = 10000, p_seed = 12345;
    std::string p_out;
    CLI::App* pre = app.add_subcommand("preset", "reproduce a named figure as plot data");
    pre->add_option("name", p_name, "fig1|fig2|fig3|fig4|fig5")->required();
    CLI::Option* p_runs_opt = pre->add_option("--runs", p_runs, "replications per histogram");
    CLI::Option* p_seed_opt = pre->add_option("--seed", p_seed, "master seed");
    pre->add_option("--out", p_out, "output file (default stdout)");

    // --- compare ---------------------------------------------------------
    std::string c_file1, c_file2;
    CLI::App* cmp = app.add_subcommand("compare",
                                       "total-variation distance between two histogram files");
    cmp->add_option("file1", c_file1)->required();
    cmp->add_option("file2", c_file2)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (ml->parsed()) {
            const double v = hptml::ml_three_param(hptml::MLArgs{ml_a, ml_b, ml_c, ml_z}, ml_tol);
            std::printf("%.15g\n", v);
            return kExitOk;
        }
        if (kn->parsed()) {
            const hptml::KernelSpec spec = to_kernel(kp);
            std::ofstream file;
            hptml::write_kernel_csv(open_output(k_out, file), spec, k_tmax, k_points);
            return kExitOk;
        }
        if (in_cmd->parsed()) {
            apply_config(in_cmd, i_config, ip, nullptr, nullptr, nullptr, nullptr);
            const hptml::HawkesParams params = to_params(ip);
            params.validate();
            std::vector<double> ts;
            for (int i = 1; i * i_step <= i_tmax + 1e-12; ++i) ts.push_back(i * i_step);
            std::ofstream file;
            hptml::write_intensity_csv(open_output(i_out, file), params, ts);
            return kExitOk;
        }
        if (sim->parsed()) {
            apply_config(sim, s_config, sp, nullptr, &s_seed, &s_horizon, nullptr);
            const hptml::HawkesParams params = to_params(sp);
            const hptml::KernelSpec spec = to_kernel(sp);
            hptml::SimOptions opt;
            opt.allow_supercritical = s_supercritical;
            if (s_algorithm == "thinning")
                opt.algorithm = hptml::SimAlgorithm::thinning;
            else if (s_algorithm != "cluster")
                throw std::invalid_argument("algorithm must be cluster|thinning");
            const hptml::SeedSpec seed{s_seed};
            const hptml::EventSequence seq =
                opt.algorithm == hptml::SimAlgorithm::cluster
                    ? hptml::simulate_cluster(params, spec, s_horizon, seed, s_rep, opt)
                    : hptml::simulate_thinning(params, spec, s_horizon, seed, s_rep, opt);
            std::ofstream file;
            hptml::write_events_csv(open_output(s_out, file), seq, params, spec, s_seed, s_rep);
            return kExitOk;
        }
        if (dist->parsed()) {
            apply_config(dist, d_config, dp, &d_runs, &d_seed, &d_t, &d_format);
            const hptml::HawkesParams params = to_params(dp);
            const hptml::KernelSpec spec = to_kernel(dp);
            hptml::SimOptions opt;
            if (d_algorithm == "thinning")
                opt.algorithm = hptml::SimAlgorithm::thinning;
            else if (d_algorithm != "cluster")
                throw std::invalid_argument("algorithm must be cluster|thinning");
            const hptml::CountHistogram h =
                hptml::count_distribution(params, spec, d_t, d_runs, hptml::SeedSpec{d_seed}, opt);
            std::ofstream file;
            std::ostream& os = open_output(d_out, file);
            if (d_format == "json")
                os << hptml::distribution_to_json(h, params, spec, d_seed).dump(2) << "\n";
            else if (d_format == "csv")
                hptml::write_distribution_csv(os, h, params, spec, d_seed);
            else
                throw std::invalid_argument("format must be csv|json");
            return kExitOk;
        }
        if (pre->parsed()) {
            std::ofstream file;
            if (p_name == "fig1") {
                const hptml::Fig1Result r = hptml::run_fig1();
                hptml::write_fig1_csv(open_output(p_out, file), r);
                return kExitOk;
            }
            if (hptml::is_distribution_preset(p_name)) {
                hptml::PresetGridResult r = hptml::run_distribution_preset(p_name, p_runs, p_seed);
                if (p_runs_opt->count() > 0) r.overrides.push_back("n_runs");
                if (p_seed_opt->count() > 0) r.overrides.push_back("master_seed");
                open_output(p_out, file) << hptml::preset_grid_to_json(r).dump(2) << "\n";
                return kExitOk;
            }
            throw std::invalid_argument("unknown preset '" + p_name + "' (use fig1..fig5)");
        }
        if (cmp->parsed()) {
            const hptml::CountHistogram h1 = read_histogram_file(c_file1);
            const hptml::CountHistogram h2 = read_histogram_file(c_file2);
            std::printf("%.6f\n", hptml::tv_distance(h1, h2));
            return kExitOk;
        }
    } catch (const std::logic_error& e) {
        // invalid_argument / domain_error: the request itself was malformed
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return kExitNumeric;
    }
    return kExitUsage;
}
