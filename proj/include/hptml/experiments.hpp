#pragma once

#include <cstdint>
#include <cstdio>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hptml/intensity.hpp"
#include "hptml/simulation.hpp"
#include "hptml/version.hpp"

namespace hptml {

using json = nlohmann::json;

/// A fully resolved experiment: preset defaults with any explicit overrides
/// applied and recorded.
struct ExperimentConfig {
    std::string preset;  ///< one of fig1..fig5, or empty
    HawkesParams params{1.0, 0.0, 1.0, 0.0, 1.0};
    KernelSpec kernel = KernelSpec::exponential(1.0);
    std::vector<double> t_values;
    std::uint64_t n_runs = 10000;
    std::uint64_t master_seed = 12345;
    std::string output;
    std::string format = "csv";
    std::vector<std::string> overrides;  ///< names of fields explicitly overridden
};

namespace detail {

inline std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

/// short form for metadata echoes and labels (caption-style values)
inline std::string fmt_short(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

inline std::string fmt_prob(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

inline SeedSpec cell_seed(std::uint64_t master, std::uint64_t cell_index, std::uint64_t role) {
    return SeedSpec{splitmix64(splitmix64(master + 7919ULL * (cell_index + 1)) + role)};
}

}  // namespace detail

inline json params_to_json(const HawkesParams& p) {
    return json{{"lambda0", p.lambda0},
                {"alpha", p.alpha},
                {"beta", p.beta},
                {"nu", p.nu},
                {"gamma", p.gamma}};
}

inline json kernel_to_json(const KernelSpec& k) {
    json j{{"kind", to_string(k.kind)}};
    if (k.kind != KernelKind::none) {
        j["beta"] = k.beta;
        j["nu"] = k.nu;
        j["gamma"] = k.gamma;
    }
    return j;
}

inline json histogram_to_json(const CountHistogram& h) {
    json counts = json::array();
    for (const auto& [n, c] : h.counts)
        counts.push_back(json{{"n", n},
                              {"frequency", c},
                              {"probability", static_cast<double>(c) / static_cast<double>(h.n_runs)}});
    return json{{"t", h.t},
                {"n_runs", h.n_runs},
                {"mean", h.mean},
                {"std_error_of_mean", h.std_error_of_mean},
                {"counts", counts}};
}

/// # key=value metadata block shared by every CSV output.
inline void write_csv_meta(std::ostream& os, const json& meta) {
    os << "# version=" << kVersion << "\n";
    for (const auto& [key, value] : meta.items()) {
        if (value.is_string())
            os << "# " << key << "=" << value.get<std::string>() << "\n";
        else
            os << "# " << key << "=" << value.dump() << "\n";
    }
}

inline void write_params_meta(std::ostream& os, const HawkesParams& p) {
    os << "# lambda0=" << detail::fmt_short(p.lambda0) << "\n"
       << "# alpha=" << detail::fmt_short(p.alpha) << "\n"
       << "# beta=" << detail::fmt_short(p.beta) << "\n"
       << "# nu=" << detail::fmt_short(p.nu) << "\n"
       << "# gamma=" << detail::fmt_short(p.gamma) << "\n";
}

// ---------------------------------------------------------------------------
// Figure 1: analytic vs numeric expected intensity
// ---------------------------------------------------------------------------

struct Fig1Row {
    double t;
    double lambda_analytic;
    double lambda_numeric;
    double abs_diff;
};

struct Fig1Result {
    HawkesParams params;
    std::vector<Fig1Row> rows;
    double max_abs_diff = 0.0;
};

inline HawkesParams fig1_params() { return HawkesParams{1.0, 0.1, 0.9, 1.0, 0.1}; }

/// Grid t in [0.01, 15] step 0.01 at the figure's parameters.
inline Fig1Result run_fig1(double t_max = 15.0, double step = 0.01) {
    Fig1Result out;
    out.params = fig1_params();
    const int n = static_cast<int>(std::llround(t_max / step));
    out.rows.reserve(static_cast<std::size_t>(n));
    for (int i = 1; i <= n; ++i) {
        const double t = i * step;
        const double la = intensity_analytic(out.params, t);
        const double ln = intensity_numeric(out.params, t).value;
        const double d = std::abs(la - ln);
        out.rows.push_back({t, la, ln, d});
        if (d > out.max_abs_diff) out.max_abs_diff = d;
    }
    return out;
}

inline void write_fig1_csv(std::ostream& os, const Fig1Result& r) {
    os << "# version=" << kVersion << "\n# preset=fig1\n";
    write_params_meta(os, r.params);
    os << "# max_abs_diff=" << detail::fmt(r.max_abs_diff) << "\n";
    os << "t,lambda_analytic,lambda_numeric,abs_diff\n";
    for (const auto& row : r.rows)
        os << detail::fmt(row.t) << ',' << detail::fmt(row.lambda_analytic) << ','
           << detail::fmt(row.lambda_numeric) << ',' << detail::fmt(row.abs_diff) << "\n";
}

// ---------------------------------------------------------------------------
// Figures 2-5: counting-distribution comparisons
// ---------------------------------------------------------------------------

struct DistributionCell {
    std::string label;        ///< e.g. "t=1 beta=0.9"
    double t;
    HawkesParams params;      ///< HPTML process parameters for this cell
    KernelSpec kernel;        ///< HPTML kernel
    HawkesParams cmp_params;  ///< comparison process parameters
    KernelSpec cmp_kernel;    ///< comparison kernel
    CountHistogram hptml;
    CountHistogram comparison;
    double tv = 0.0;
};

struct PresetGridResult {
    std::string preset;
    std::uint64_t master_seed = 0;
    std::uint64_t n_runs = 0;
    std::vector<DistributionCell> cells;
    std::vector<std::string> overrides;
};

inline bool is_distribution_preset(const std::string& name) {
    return name == "fig2" || name == "fig3" || name == "fig4" || name == "fig5";
}

/// Cell grids exactly as listed in the figure captions.
inline PresetGridResult run_distribution_preset(const std::string& name,
                                                std::uint64_t n_runs = 10000,
                                                std::uint64_t master_seed = 12345) {
    if (!is_distribution_preset(name))
        throw std::invalid_argument("run_distribution_preset: unknown preset '" + name + "'");
    PresetGridResult out;
    out.preset = name;
    out.master_seed = master_seed;
    out.n_runs = n_runs;

    struct CellDef {
        std::string label;
        double t;
        HawkesParams params;
        KernelSpec kernel;
        HawkesParams cmp_params;
        KernelSpec cmp_kernel;
    };
    std::vector<CellDef> defs;

    if (name == "fig2") {
        // HPTML vs Poisson(lambda0 t) in the alpha -> 0, beta -> 1, nu -> 0 corner
        for (double t : {1.0, 15.0})
            for (double beta : {0.9, 0.99}) {
                HawkesParams p{1.0, 0.01, beta, 0.01, 1.0};
                HawkesParams q{1.0, 0.0, 1.0, 0.0, 1.0};
                defs.push_back({"t=" + detail::fmt_short(t) + " beta=" + detail::fmt_short(beta), t, p,
                                KernelSpec::from_params(p), q, KernelSpec::none()});
            }
    } else if (name == "fig3" || name == "fig4") {
        for (double t : {1.0, 10.0})
            for (double alpha : {0.1, 0.5}) {
                HawkesParams p{1.0, alpha, 0.99, 0.01, 1.0};
                HawkesParams q{1.0, alpha, name == "fig3" ? 1.0 : 0.99, 0.0, 1.0};
                const KernelSpec cmp = name == "fig3" ? KernelSpec::exponential(1.0)
                                                      : KernelSpec::mittag_leffler(0.99, 1.0);
                defs.push_back({"t=" + detail::fmt_short(t) + " alpha=" + detail::fmt_short(alpha), t, p,
                                KernelSpec::from_params(p), q, cmp});
            }
    } else {  // fig5
        for (double t : {1.0, 10.0})
            for (double beta : {0.5, 0.7}) {
                HawkesParams p{1.0, 0.5, beta, 1.0, 1.0};
                HawkesParams q{1.0, 0.0, 1.0, 0.0, 1.0};
                defs.push_back({"t=" + detail::fmt_short(t) + " beta=" + detail::fmt_short(beta), t, p,
                                KernelSpec::from_params(p), q, KernelSpec::none()});
            }
    }

    std::uint64_t idx = 0;
    for (const auto& def : defs) {
        DistributionCell cell;
        cell.label = def.label;
        cell.t = def.t;
        cell.params = def.params;
        cell.kernel = def.kernel;
        cell.cmp_params = def.cmp_params;
        cell.cmp_kernel = def.cmp_kernel;
        cell.hptml = count_distribution(def.params, def.kernel, def.t, n_runs,
                                        detail::cell_seed(master_seed, idx, 0));
        cell.comparison = count_distribution(def.cmp_params, def.cmp_kernel, def.t, n_runs,
                                             detail::cell_seed(master_seed, idx, 1));
        cell.tv = tv_distance(cell.hptml, cell.comparison);
        out.cells.push_back(std::move(cell));
        ++idx;
    }
    return out;
}

inline json preset_grid_to_json(const PresetGridResult& r) {
    json cells = json::array();
    for (const auto& c : r.cells)
        cells.push_back(json{{"label", c.label},
                             {"t", c.t},
                             {"params", params_to_json(c.params)},
                             {"kernel", kernel_to_json(c.kernel)},
                             {"comparison_params", params_to_json(c.cmp_params)},
                             {"comparison_kernel", kernel_to_json(c.cmp_kernel)},
                             {"hptml", histogram_to_json(c.hptml)},
                             {"comparison", histogram_to_json(c.comparison)},
                             {"tv_distance", c.tv}});
    return json{{"meta",
                 {{"preset", r.preset},
                  {"seed", r.master_seed},
                  {"n_runs", r.n_runs},
                  {"version", kVersion},
                  {"overrides", r.overrides}}},
                {"data", {{"cells", cells}}}};
}

// ---------------------------------------------------------------------------
// Plain CSV emitters for the generic subcommands
// ---------------------------------------------------------------------------

inline void write_distribution_csv(std::ostream& os, const CountHistogram& h,
                                   const HawkesParams& p, const KernelSpec& k,
                                   std::uint64_t master_seed) {
    os << "# version=" << kVersion << "\n";
    write_params_meta(os, p);
    os << "# kernel=" << to_string(k.kind) << "\n"
       << "# t=" << detail::fmt(h.t) << "\n"
       << "# n_runs=" << h.n_runs << "\n"
       << "# seed=" << master_seed << "\n"
       << "# mean=" << detail::fmt(h.mean) << "\n"
       << "# std_error_of_mean=" << detail::fmt(h.std_error_of_mean) << "\n";
    os << "n,frequency,probability\n";
    for (const auto& [n, c] : h.counts)
        os << n << ',' << c << ','
           << detail::fmt_prob(static_cast<double>(c) / static_cast<double>(h.n_runs)) << "\n";
}

inline json distribution_to_json(const CountHistogram& h, const HawkesParams& p,
                                 const KernelSpec& k, std::uint64_t master_seed) {
    return json{{"meta",
                 {{"params", params_to_json(p)},
                  {"kernel", kernel_to_json(k)},
                  {"seed", master_seed},
                  {"n_runs", h.n_runs},
                  {"version", kVersion}}},
                {"data", histogram_to_json(h)}};
}

inline void write_events_csv(std::ostream& os, const EventSequence& seq, const HawkesParams& p,
                             const KernelSpec& k, std::uint64_t master_seed,
                             std::uint64_t replication) {
    os << "# version=" << kVersion << "\n";
    write_params_meta(os, p);
    os << "# kernel=" << to_string(k.kind) << "\n"
       << "# horizon=" << detail::fmt(seq.horizon) << "\n"
       << "# seed=" << master_seed << "\n"
       << "# replication=" << replication << "\n"
       << "# n_events=" << seq.times.size() << "\n";
    os << "event_time\n";
    for (double t : seq.times) os << detail::fmt(t) << "\n";
}

inline void write_kernel_csv(std::ostream& os, const KernelSpec& k, double t_max,
                             std::size_t points) {
    if (!(t_max > 0.0) || points < 2)
        throw std::invalid_argument("write_kernel_csv: need t_max > 0 and points >= 2");
    os << "# version=" << kVersion << "\n"
       << "# kernel=" << to_string(k.kind) << "\n"
       << "# beta=" << detail::fmt(k.beta) << "\n"
       << "# nu=" << detail::fmt(k.nu) << "\n"
       << "# gamma=" << detail::fmt(k.gamma) << "\n"
       << "# tmax=" << detail::fmt(t_max) << "\n";
    os << "t,density,cdf\n";
    for (std::size_t i = 1; i <= points; ++i) {
        const double t = t_max * static_cast<double>(i) / static_cast<double>(points);
        os << detail::fmt(t) << ',' << detail::fmt(kernel_density(k, t)) << ','
           << detail::fmt(kernel_cdf(k, t)) << "\n";
    }
}

inline void write_intensity_csv(std::ostream& os, const HawkesParams& p,
                                const std::vector<double>& ts) {
    os << "# version=" << kVersion << "\n";
    write_params_meta(os, p);
    os << "t,lambda_analytic,lambda_numeric,abs_diff\n";
    for (double t : ts) {
        const double la = t == 0.0 ? p.lambda0 : intensity_analytic(p, t);
        const double ln = t == 0.0 ? p.lambda0 : intensity_numeric(p, t).value;
        os << detail::fmt(t) << ',' << detail::fmt(la) << ',' << detail::fmt(ln) << ','
           << detail::fmt(std::abs(la - ln)) << "\n";
    }
}

}  // namespace hptml
