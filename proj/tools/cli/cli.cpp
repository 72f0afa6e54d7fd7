#include "cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gyule/errors.hpp"
#include "gyule/estimation.hpp"
#include "gyule/model.hpp"
#include "gyule/simulator.hpp"

namespace gyule::cli {
namespace {

using Cell = std::variant<std::int64_t, double, std::string, bool>;

// A list of records sharing one set of columns. Key-value results are a
// single record and print as a flat JSON object.
struct Output {
    std::string command;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    bool flat = false;
};

std::string fmt_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

nlohmann::json to_json(const Cell& c) {
    return std::visit(
        [](const auto& v) -> nlohmann::json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>) {
                if (!std::isfinite(v)) return nullptr;
                // Round to 10 significant digits; the shortest round-trip
                // printer then emits at most that many.
                return std::strtod(fmt_double(v).c_str(), nullptr);
            } else {
                return v;
            }
        },
        c);
}

std::string to_text(const Cell& c) {
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>) return fmt_double(v);
            else if constexpr (std::is_same_v<T, bool>) return v ? "true" : "false";
            else if constexpr (std::is_same_v<T, std::string>) return v;
            else return std::to_string(v);
        },
        c);
}

void emit(const Output& o, const std::string& format, std::ostream& out) {
    if (format == "json") {
        nlohmann::ordered_json doc;
        doc["command"] = o.command;
        if (o.flat) {
            for (std::size_t i = 0; i < o.columns.size(); ++i) doc[o.columns[i]] = to_json(o.rows.at(0)[i]);
        } else {
            doc["records"] = nlohmann::ordered_json::array();
            for (const auto& row : o.rows) {
                nlohmann::ordered_json rec;
                for (std::size_t i = 0; i < o.columns.size(); ++i) rec[o.columns[i]] = to_json(row[i]);
                doc["records"].push_back(std::move(rec));
            }
        }
        out << doc.dump(2) << '\n';
        return;
    }
    for (std::size_t i = 0; i < o.columns.size(); ++i) out << (i ? "\t" : "") << o.columns[i];
    out << '\n';
    for (const auto& row : o.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "\t" : "") << to_text(row[i]);
        out << '\n';
    }
}

struct Flags {
    double beta = 0.0, lambda = 0.0, mu = 0.0;
    std::int64_t n_min = -1;
    std::int64_t n_max = -1;
    double t_max = std::numeric_limits<double>::quiet_NaN();
    std::int64_t max_pages = 0;
    std::vector<double> u;
    std::string input, output, format = "tsv";
    std::uint64_t seed = 0;
    unsigned workers = 1;
    std::int64_t count = 0;
    std::int64_t replicates = 1;
    std::string events_path, snapshot_path;
    std::string method = "mle";
    bool include_zero = false;
    double lambda_scale = 1.0;
    int estimated_params = 0;
    std::int64_t max_events = 50'000'000;
};

ModelParams params_of(const Flags& f) { return ModelParams(f.beta, f.lambda, f.mu); }

void add_params(CLI::App* sub, Flags& f) {
    sub->add_option("--beta", f.beta, "page rate constant beta > 0")->required();
    sub->add_option("--lambda", f.lambda, "in-link birth rate lambda > 0")->required();
    sub->add_option("--mu", f.mu, "in-link death rate mu >= 0")->required();
}

void add_common(CLI::App* sub, Flags& f) {
    sub->add_option("--format", f.format, "json or tsv")->check(CLI::IsMember({"json", "tsv"}));
    sub->add_option("--output", f.output, "write the result here instead of stdout");
}

Output cmd_pmf(const Flags& f) {
    const ModelParams p = params_of(f);
    Output o{"pmf", {"n", "probability"}, {}};
    for (std::int64_t n = std::max<std::int64_t>(f.n_min, 0); n <= f.n_max; ++n) o.rows.push_back({n, pmf(n, p)});
    return o;
}

Output cmd_moments(const Flags& f) {
    const ModelParams p = params_of(f);
    const Moment m = mean(p);
    const Moment v = variance(p);
    const double inf = std::numeric_limits<double>::infinity();
    Output o{"moments",
             {"regime", "pmf_zero", "mean", "mean_infinite", "variance", "variance_infinite"},
             {{std::string(to_string(regime(p))), pmf_zero(p), m.is_infinite() ? inf : m.value(), m.is_infinite(),
               v.is_infinite() ? inf : v.value(), v.is_infinite()}},
             true};
    return o;
}

Output cmd_pgf(const Flags& f) {
    const ModelParams p = params_of(f);
    Output o{"pgf", {"u", "pgf"}, {}};
    for (double u : f.u) o.rows.push_back({u, pgf(u, p)});
    return o;
}

void write_file(const std::string& path, const std::string& what,
                const std::function<void(std::ostream&)>& body) {
    std::ofstream file(path);
    if (!file) throw IoError("cannot open " + what + " file '" + path + "' for writing");
    body(file);
    if (!file) throw IoError("error while writing " + what + " file '" + path + "'");
}

Output cmd_simulate(const Flags& f) {
    SimConfig c{params_of(f)};
    if (!std::isnan(f.t_max)) c.max_time = f.t_max;
    c.max_pages = f.max_pages;
    c.seed = f.seed;
    c.workers = f.workers;
    c.max_events = f.max_events;
    c.record_events = !f.events_path.empty();
    if (f.replicates > 1 && (!f.events_path.empty() || !f.snapshot_path.empty()))
        throw DomainError("--events and --snapshot need --replicates 1");

    const std::vector<NetworkSnapshot> reps = simulate_replicates(c, f.replicates);
    if (!f.events_path.empty())
        write_file(f.events_path, "event log", [&](std::ostream& os) { write_event_log_csv(os, reps.at(0)); });
    if (!f.snapshot_path.empty())
        write_file(f.snapshot_path, "snapshot", [&](std::ostream& os) { write_snapshot_csv(os, reps.at(0)); });

    Output o{"simulate", {"replicate", "time", "pages", "absorbed", "max_inlinks", "total_inlinks", "events"}, {}};
    for (std::size_t r = 0; r < reps.size(); ++r) {
        std::int64_t absorbed = 0, max_k = 0, total = 0;
        for (const Page& pg : reps[r].pages) {
            absorbed += pg.inlinks == 0;
            max_k = std::max(max_k, pg.inlinks);
            total += pg.inlinks;
        }
        o.rows.push_back({static_cast<std::int64_t>(r), reps[r].time, static_cast<std::int64_t>(reps[r].pages.size()),
                          absorbed, max_k, total, reps[r].event_count});
    }
    return o;
}

Output cmd_sample(const Flags& f) {
    const LimitSamples s = sample_limit_degree(params_of(f), f.count, f.seed, f.workers);
    Output o{"sample", {"n", "count"}, {}};
    if (s.values.empty()) return o;
    const DegreeHistogram h = empirical_histogram(s.values);
    for (const auto& [n, c] : h.counts()) o.rows.push_back({n, c});
    return o;
}

Output fit_output(const FitResult& r) {
    const ModelParams& p = r.representative_params;
    return Output{"fit",
                  {"method", "beta_over_delta", "mu_over_delta", "mu_identifiable", "beta_over_lambda",
                   "mu_over_lambda", "beta", "lambda", "mu", "slope", "intercept", "slope_stderr",
                   "intercept_stderr", "slope_pvalue", "intercept_pvalue", "beta_over_lambda_stderr",
                   "mu_over_lambda_stderr", "objective", "points", "evaluations"},
                  {{std::string(to_string(r.method)), r.beta_over_delta, r.mu_over_delta, r.mu_identifiable,
                    r.beta_over_lambda, r.mu_over_lambda, p.beta(), p.lambda(), p.mu(), r.slope, r.intercept,
                    r.slope_stderr, r.intercept_stderr, r.slope_pvalue, r.intercept_pvalue,
                    r.beta_over_lambda_stderr, r.mu_over_lambda_stderr, r.objective, r.points, r.evaluations}},
                  true};
}

Output cmd_fit(const Flags& f) {
    const DegreeHistogram h = read_histogram_csv(f.input);
    if (f.method == "regression") {
        const std::int64_t n_max = f.n_max < 0 ? std::numeric_limits<std::int64_t>::max() : f.n_max;
        return fit_output(tail_regression(h, std::max<std::int64_t>(f.n_min, 1), n_max, f.lambda_scale));
    }
    MleOptions opt;
    opt.include_zero = f.include_zero;
    opt.lambda_scale = f.lambda_scale;
    return fit_output(fit_mle(h, opt));
}

Output cmd_tail(const Flags& f) {
    const ModelParams p = params_of(f);
    if (!(p.delta() > 0.0)) throw DomainError("tail: needs lambda > mu");
    const TailLine line = tail_line(p.beta(), p.delta(), p.mu());
    const double B = p.beta() / p.delta();
    return Output{"tail",
                  {"beta_over_delta", "mu_over_delta", "slope", "intercept", "limit_ratio"},
                  {{B, p.mu() / p.delta(), line.slope, line.intercept,
                    std::pow(p.delta() / p.lambda(), 1.0 - B)}},
                  true};
}

Output cmd_compare(const Flags& f) {
    const ModelParams p = params_of(f);
    if (!(p.delta() > 0.0)) throw DomainError("compare-yule: needs lambda > mu");
    const double b = p.beta(), d = p.delta(), m = p.mu();
    Output o{"compare-yule", {"n", "pmf", "yule_pmf", "ratio", "ratio_asymptotic"}, {}};
    for (std::int64_t n = std::max<std::int64_t>(f.n_min, 1); n <= f.n_max; ++n)
        o.rows.push_back({n, pmf(n, p), yule_simon_pmf(n, b, d), tail_ratio(n, b, d, m),
                          tail_ratio_asymptotic(n, b, d, m)});
    return o;
}

Output cmd_gof(const Flags& f) {
    const DegreeHistogram h = read_histogram_csv(f.input);
    const GofReport g = goodness_of_fit(h, params_of(f), f.include_zero, f.estimated_params);
    return Output{"gof",
                  {"chi_square", "dof", "p_value", "max_cdf_deviation", "bins", "total"},
                  {{g.chi_square, static_cast<std::int64_t>(g.dof), g.p_value, g.max_cdf_deviation,
                    static_cast<std::int64_t>(g.bins.size()), h.total()}},
                  true};
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Generalized Yule model with in-link detachment", "gyule"};
    app.require_subcommand(1);
    Flags f;

    auto* pmf_cmd = app.add_subcommand("pmf", "P(N = n) for n in [n-min, n-max]");
    add_params(pmf_cmd, f);
    pmf_cmd->add_option("--n-max", f.n_max, "largest n")->required()->check(CLI::NonNegativeNumber);
    pmf_cmd->add_option("--n-min", f.n_min, "smallest n (default 0)")->check(CLI::NonNegativeNumber);

    auto* mom_cmd = app.add_subcommand("moments", "regime, P(N = 0), mean and variance");
    add_params(mom_cmd, f);

    auto* pgf_cmd = app.add_subcommand("pgf", "generating function E u^N");
    add_params(pgf_cmd, f);
    pgf_cmd->add_option("--u", f.u, "evaluation points in [-1, 1]")->required();

    auto* sim_cmd = app.add_subcommand("simulate", "simulate the network");
    add_params(sim_cmd, f);
    auto* t_opt = sim_cmd->add_option("--t-max", f.t_max, "stop time")->check(CLI::PositiveNumber);
    auto* p_opt = sim_cmd->add_option("--max-pages", f.max_pages, "stop at this many pages")->check(CLI::PositiveNumber);
    sim_cmd->add_option("--seed", f.seed, "random seed");
    sim_cmd->add_option("--workers", f.workers, "threads")->check(CLI::PositiveNumber);
    sim_cmd->add_option("--replicates", f.replicates, "independent realizations")->check(CLI::PositiveNumber);
    sim_cmd->add_option("--events", f.events_path, "event log CSV");
    sim_cmd->add_option("--snapshot", f.snapshot_path, "final page table CSV");
    sim_cmd->add_option("--max-events", f.max_events, "event budget per realization")->check(CLI::PositiveNumber);

    auto* sample_cmd = app.add_subcommand("sample", "histogram of draws from the limiting law");
    add_params(sample_cmd, f);
    sample_cmd->add_option("--count", f.count, "number of draws")->required()->check(CLI::NonNegativeNumber);
    sample_cmd->add_option("--seed", f.seed, "random seed");
    sample_cmd->add_option("--workers", f.workers, "threads")->check(CLI::PositiveNumber);

    auto* fit_cmd = app.add_subcommand("fit", "fit a degree histogram (CSV n,count)");
    fit_cmd->add_option("--input", f.input, "histogram CSV")->required();
    fit_cmd->add_option("--method", f.method, "regression or mle")->check(CLI::IsMember({"regression", "mle"}));
    fit_cmd->add_option("--n-min", f.n_min, "regression: smallest degree used")->check(CLI::PositiveNumber);
    fit_cmd->add_option("--n-max", f.n_max, "regression: largest degree used")->check(CLI::PositiveNumber);
    fit_cmd->add_flag("--include-zero", f.include_zero, "mle: model the n = 0 bin");
    fit_cmd->add_option("--lambda-scale", f.lambda_scale, "lambda of the reported rates")->check(CLI::PositiveNumber);

    auto* tail_cmd = app.add_subcommand("tail", "log-log tail line of the pmf");
    add_params(tail_cmd, f);

    auto* cmp_cmd = app.add_subcommand("compare-yule", "pmf against the Yule-Simon law of rates (beta, delta)");
    add_params(cmp_cmd, f);
    cmp_cmd->add_option("--n-max", f.n_max, "largest n")->required()->check(CLI::PositiveNumber);
    cmp_cmd->add_option("--n-min", f.n_min, "smallest n (default 1)")->check(CLI::PositiveNumber);

    auto* gof_cmd = app.add_subcommand("gof", "Pearson chi-square of a histogram against the model");
    add_params(gof_cmd, f);
    gof_cmd->add_option("--input", f.input, "histogram CSV")->required();
    gof_cmd->add_flag("--include-zero", f.include_zero, "keep the n = 0 bin");
    gof_cmd->add_option("--estimated-params", f.estimated_params, "parameters fitted to this data")
        ->check(CLI::NonNegativeNumber);

    for (CLI::App* sub : app.get_subcommands({})) add_common(sub, f);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }
    if (sim_cmd->parsed() && t_opt->count() == 0 && p_opt->count() == 0) {
        err << "simulate: one of --t-max or --max-pages is required\n";
        return kExitUsage;
    }

    try {
        Output o;
        if (pmf_cmd->parsed()) o = cmd_pmf(f);
        else if (mom_cmd->parsed()) o = cmd_moments(f);
        else if (pgf_cmd->parsed()) o = cmd_pgf(f);
        else if (sim_cmd->parsed()) o = cmd_simulate(f);
        else if (sample_cmd->parsed()) o = cmd_sample(f);
        else if (fit_cmd->parsed()) o = cmd_fit(f);
        else if (tail_cmd->parsed()) o = cmd_tail(f);
        else if (cmp_cmd->parsed()) o = cmd_compare(f);
        else o = cmd_gof(f);

        if (f.output.empty()) {
            emit(o, f.format, out);
        } else {
            write_file(f.output, "output", [&](std::ostream& os) { emit(o, f.format, os); });
        }
        return kExitOk;
    } catch (const ParseError& e) {
        err << "error: malformed input: " << e.what() << '\n';
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
    } catch (const FitError& e) {
        err << "error: fit failed: " << e.what() << '\n';
    } catch (const ResourceError& e) {
        err << "error: " << e.what() << '\n';
    } catch (const AccuracyError& e) {
        err << "error: numerical accuracy: " << e.what() << '\n';
    } catch (const std::domain_error& e) {
        err << "error: invalid parameters: " << e.what() << '\n';
    }
    return kExitFailure;
}

}  // namespace gyule::cli
