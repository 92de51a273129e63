#include "relect/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "relect/analysis.hpp"
#include "relect/rng.hpp"
#include "relect/harness.hpp"
#include "relect/verification.hpp"

namespace relect {

namespace {

double default_alpha(Protocol p) { return p == Protocol::Alg1 ? 1.3361 : 1.3295; }

int env_workers(int configured) {
    if (const char* env = std::getenv("RADIO_ELECT_WORKERS")) {
        const int w = std::atoi(env);
        if (w > 0) return w;
    }
    return configured;
}

ProtocolParams make_params(const CliConfig& cfg, double alpha) {
    ProtocolParams p = cfg.protocol == Protocol::Alg1 ? ProtocolParams::alg1(alpha)
                                                      : ProtocolParams::alg2(alpha);
    p.k_start = cfg.k_start;
    p.max_rounds = cfg.max_rounds;
    return p;
}

void append_stats_columns(Table& table) {
    for (const char* name :
         {"mean_rounds", "sd_rounds", "ci95_rounds", "mean_prob_slots", "sd_prob_slots",
          "ci95_prob_slots", "mean_total_slots", "sd_total_slots", "ci95_total_slots",
          "mean_awake_mean", "sd_awake_mean", "ci95_awake_mean", "mean_awake_max",
          "sd_awake_max", "ci95_awake_max", "round1_success_freq", "termination_rate"}) {
        table.columns.emplace_back(name);
    }
}

void append_stats_cells(std::vector<Cell>& row, const TrialStats& s) {
    for (const StatSummary* col :
         {&s.rounds, &s.probabilistic_slots, &s.total_slots, &s.awake_mean, &s.awake_max}) {
        row.push_back(num_cell(col->mean));
        row.push_back(num_cell(col->stddev));
        row.push_back(num_cell(col->ci95));
    }
    row.push_back(num_cell(s.round1_success_freq));
    row.push_back(num_cell(s.termination_rate));
}

void emit(const CliConfig& cfg, const Table& table) {
    if (cfg.output_path) {
        std::ofstream file(*cfg.output_path, std::ios::binary);
        if (!file) throw std::runtime_error("cannot open output file: " + *cfg.output_path);
        write_table(file, table, cfg.format);
    } else {
        write_table(std::cout, table, cfg.format);
    }
}

// One row per trial; aggregated statistics live in the sweep command.
int run_simulate(const CliConfig& cfg) {
    Table table;
    table.columns = {"protocol", "n",           "alpha",      "k_start",     "trial",
                     "rounds",   "prob_slots",  "total_slots", "awake_mean", "awake_max",
                     "leader",   "terminated"};
    const double alpha =
        cfg.alpha_values.empty() ? default_alpha(cfg.protocol) : cfg.alpha_values.front();
    const std::string proto = cfg.protocol == Protocol::Alg1 ? "alg1" : "alg2";
    for (int n : cfg.n_values) {
        const ProtocolParams params = make_params(cfg, alpha);
        for (int t = 0; t < cfg.trials; ++t) {
            const RunMetrics m = run_election(params, n, trial_seed(cfg.seed, t));
            double awake_sum = 0;
            std::uint32_t awake_max = 0;
            for (std::uint32_t a : m.awake_per_station) {
                awake_sum += a;
                awake_max = std::max(awake_max, a);
            }
            table.add_row({str_cell(proto), int_cell(n), num_cell(alpha), int_cell(cfg.k_start),
                           int_cell(t), int_cell(m.rounds_used),
                           int_cell(static_cast<std::int64_t>(m.probabilistic_slots)),
                           int_cell(static_cast<std::int64_t>(m.total_slots)),
                           num_cell(awake_sum / n), int_cell(awake_max),
                           int_cell(m.leader_index), int_cell(m.terminated ? 1 : 0)});
        }
    }
    emit(cfg, table);
    return 0;
}

int run_analyze_constants(const CliConfig& cfg) {
    const AnalysisConstants k = series_constants();
    Table table;
    table.columns = {"name", "value"};
    const std::pair<const char*, double> rows[] = {
        {"series_m2_undamped", k.series_m2_undamped},
        {"series_m1_undamped", k.series_m1_undamped},
        {"series_m2_damped", k.series_m2_damped},
        {"series_m1_damped", k.series_m1_damped},
        {"s_inf_alg1", k.s_inf_alg1},
        {"s_inf_alg2", k.s_inf_alg2},
        {"p_inf_alg1", k.p_inf_alg1},
        {"p_inf_alg2", k.p_inf_alg2},
        {"q1", k.q1},
        {"q2", k.q2},
        {"q1_reference", kQ1Reference},
        {"q2_reference", kQ2Reference},
        {"alpha_max_alg1", k.alpha_max_alg1},
        {"alpha_max_alg2", k.alpha_max_alg2},
    };
    for (const auto& [name, value] : rows)
        table.add_row({str_cell(name), num_cell(value)});
    emit(cfg, table);
    return 0;
}

int run_analyze_cost(const CliConfig& cfg) {
    Table table;
    table.columns = {"kind", "q", "alpha", "c"};
    const double amax = cfg.q >= 1.0 ? 16.0 : 1.0 / (1.0 - cfg.q);
    const int samples = cfg.cost_samples;
    for (int i = 1; i <= samples; ++i) {
        const double alpha = 1.0 + (amax - 1.0) * i / (samples + 1);
        table.add_row({str_cell("sample"), num_cell(cfg.q), num_cell(alpha),
                       num_cell(c_of_alpha(cfg.q, alpha))});
    }
    const OptimalAlpha opt = optimal_alpha(cfg.q);
    table.add_row(
        {str_cell("optimum"), num_cell(cfg.q), num_cell(opt.alpha_star), num_cell(opt.c_star)});
    emit(cfg, table);
    return 0;
}

int run_sweep(const CliConfig& cfg) {
    std::vector<double> alphas =
        cfg.alpha_values.empty() ? std::vector<double>{default_alpha(cfg.protocol)}
                                 : cfg.alpha_values;
    const auto rows = sweep(cfg.n_values, alphas, cfg.protocol, cfg.trials, cfg.seed,
                            env_workers(cfg.workers));
    Table table;
    table.columns = {"protocol", "n",       "alpha",        "q_reference",
                     "critical_round", "c_reference", "slot_bound", "awake_scale"};
    append_stats_columns(table);
    for (const SweepRow& r : rows) {
        std::vector<Cell> row{str_cell(cfg.protocol == Protocol::Alg1 ? "alg1" : "alg2"),
                              int_cell(r.n),
                              num_cell(r.alpha),
                              num_cell(r.q_reference),
                              int_cell(r.critical_round),
                              num_cell(r.c_reference),
                              num_cell(r.predicted_slot_bound),
                              num_cell(r.predicted_awake_scale)};
        append_stats_cells(row, r.stats);
        table.add_row(std::move(row));
    }
    emit(cfg, table);
    return 0;
}

int run_verify(const CliConfig& cfg) {
    VerifyOptions options;
    options.workers = env_workers(cfg.workers);
    std::ostringstream buffer;
    const bool ok = run_verification(buffer, options);
    if (cfg.output_path) {
        std::ofstream file(*cfg.output_path, std::ios::binary);
        if (!file) throw std::runtime_error("cannot open output file: " + *cfg.output_path);
        file << buffer.str();
    } else {
        std::cout << buffer.str();
    }
    return ok ? 0 : 3;
}

}  // namespace

CliConfig parse_args(const std::vector<std::string>& argv) {
    CliConfig cfg;
    CLI::App app{"slotted-channel leader election: simulator and analysis toolkit"};
    app.require_subcommand(1);

    std::string protocol = "alg1";
    std::string format = "csv";
    std::string output;

    auto add_common = [&](CLI::App* sub, bool with_protocol) {
        if (with_protocol)
            sub->add_option("--protocol", protocol)->check(CLI::IsMember({"alg1", "alg2"}));
        sub->add_option("--seed", cfg.seed);
        sub->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--output", output);
        sub->add_option("--workers", cfg.workers)->check(CLI::PositiveNumber);
    };

    CLI::App* sim = app.add_subcommand("simulate", "run election trials for one configuration");
    sim->add_option("--n", cfg.n_values)->delimiter(',')->check(CLI::Range(2, 1 << 26));
    std::vector<double> alphas;
    sim->add_option("--alpha", alphas)->delimiter(',');
    sim->add_option("--k-start", cfg.k_start)->check(CLI::PositiveNumber);
    sim->add_option("--max-rounds", cfg.max_rounds)->check(CLI::PositiveNumber);
    sim->add_option("--trials", cfg.trials)->check(CLI::PositiveNumber);
    add_common(sim, true);

    CLI::App* analyze = app.add_subcommand("analyze", "closed-form constants and cost curves");
    analyze->require_subcommand(1);
    CLI::App* constants = analyze->add_subcommand("constants", "series constants table");
    add_common(constants, false);
    CLI::App* cost = analyze->add_subcommand("cost", "c_q(alpha) curve and its optimum");
    cost->add_option("--q", cfg.q)->check(CLI::Range(1e-9, 1.0));
    cost->add_option("--samples", cfg.cost_samples)->check(CLI::PositiveNumber);
    add_common(cost, false);

    CLI::App* sw = app.add_subcommand("sweep", "cross-product of n and alpha values");
    sw->add_option("--n", cfg.n_values)->delimiter(',')->check(CLI::Range(2, 1 << 26));
    sw->add_option("--alpha", alphas)->delimiter(',');
    sw->add_option("--trials", cfg.trials)->check(CLI::PositiveNumber);
    add_common(sw, true);

    CLI::App* verify = app.add_subcommand("verify", "run the full verification suite");
    add_common(verify, false);

    std::vector<std::string> args(argv.rbegin(), argv.rend());
    try {
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        throw UsageError(e.what());
    }

    cfg.protocol = protocol == "alg2" ? Protocol::Alg2 : Protocol::Alg1;
    cfg.format = format == "json" ? OutputFormat::Json : OutputFormat::Csv;
    if (!output.empty()) cfg.output_path = output;
    cfg.alpha_values = alphas;
    for (double a : cfg.alpha_values) {
        if (!(a > 1.0)) throw UsageError("alpha must exceed 1 (got " + format_sig6(a) + ")");
    }
    for (int n : cfg.n_values) {
        if (n < 2) throw UsageError("n must be at least 2");
    }
    if (cfg.trials < 1) throw UsageError("trials must be positive");

    if (sim->parsed()) cfg.command = Command::Simulate;
    else if (constants->parsed()) cfg.command = Command::AnalyzeConstants;
    else if (cost->parsed()) cfg.command = Command::AnalyzeCost;
    else if (sw->parsed()) cfg.command = Command::Sweep;
    else cfg.command = Command::Verify;
    return cfg;
}

int execute(const CliConfig& cfg) {
    switch (cfg.command) {
        case Command::Simulate: return run_simulate(cfg);
        case Command::AnalyzeConstants: return run_analyze_constants(cfg);
        case Command::AnalyzeCost: return run_analyze_cost(cfg);
        case Command::Sweep: return run_sweep(cfg);
        case Command::Verify: return run_verify(cfg);
    }
    return 2;
}

}  // namespace relect
