// Command-line front end for the duplication-model library: single-run
// simulation, the Monte Carlo experiments, and the exact-law evaluators.
// Exit codes: 0 success, 2 usage error, 3 numeric-domain error, 4 I/O error.

#include <cstdint>
#include <cstdio>
#include <exception>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "yulefam/duplication.hpp"
#include "yulefam/experiments.hpp"
#include "yulefam/io.hpp"
#include "yulefam/limit_laws.hpp"
#include "yulefam/partitions.hpp"
#include "yulefam/qrn.hpp"
#include "yulefam/version.hpp"

namespace {

using namespace yulefam;

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string cell;
    while (std::getline(ss, cell, ','))
        if (!cell.empty()) out.push_back(std::stod(cell));
    if (out.empty()) throw std::domain_error("empty list: " + text);
    return out;
}

std::vector<std::uint64_t> parse_u64_list(const std::string& text) {
    std::vector<std::uint64_t> out;
    for (double v : parse_double_list(text)) out.push_back(static_cast<std::uint64_t>(v));
    return out;
}

// Blocks separated by '|', elements by ',' or spaces: "1,2|3" or "1 2|3".
SetPartition parse_partition(const std::string& text) {
    std::vector<std::vector<std::uint32_t>> blocks;
    std::stringstream bs(text);
    std::string block;
    while (std::getline(bs, block, '|')) {
        std::vector<std::uint32_t> elems;
        std::string token;
        std::stringstream es(block);
        while (std::getline(es, token, ',')) {
            std::stringstream ws(token);
            std::string w;
            while (ws >> w) elems.push_back(static_cast<std::uint32_t>(std::stoul(w)));
        }
        if (!elems.empty()) blocks.push_back(std::move(elems));
    }
    return SetPartition::from_blocks(std::move(blocks));
}

std::string list_to_string(const std::vector<double>& vs) {
    std::string s;
    for (std::size_t i = 0; i < vs.size(); ++i) {
        if (i) s += ",";
        s += format_g17(vs[i]);
    }
    return s;
}

std::string derive_census_path(const std::string& out) {
    const auto dot = out.rfind('.');
    if (dot == std::string::npos || out.find('/', dot) != std::string::npos)
        return out + "-census";
    return out.substr(0, dot) + "-census" + out.substr(dot);
}

void print_value(double v) { std::printf("%.15g\n", v); }

struct CommonOpts {
    std::uint64_t seed = 1;
    std::string out;
    std::string format = "csv";
    unsigned threads = 0;
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool needs_out = true) {
    cmd->add_option("--seed", opts.seed, "master seed (also via YULEFAM_SEED)")
        ->envname("YULEFAM_SEED");
    auto* out = cmd->add_option("--out", opts.out, "output path");
    if (needs_out) out->required();
    cmd->add_option("--format", opts.format, "output format")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--threads", opts.threads,
                    "worker threads (0 = all cores; results identical for any value)");
}

int run_simulate(double r, std::uint64_t n, const CommonOpts& opts,
                 const std::string& census_out) {
    ModelParams params{r, n};
    const auto assignment = simulate_duplication(params, opts.seed);
    const auto cens = census(assignment);

    HeaderKvs config{{"command", "simulate"},
                     {"r", format_g17(r)},
                     {"n", std::to_string(n)},
                     {"seed", std::to_string(opts.seed)},
                     {"format", opts.format}};

    Table census_table;
    census_table.config = config;
    census_table.config.emplace_back("table", "census");
    census_table.columns = {"label", "size"};
    for (std::uint64_t k = 1; k <= n; ++k)
        if (cens.size_by_label[k] > 0)
            census_table.rows.push_back(
                {static_cast<double>(k), static_cast<double>(cens.size_by_label[k])});

    Table tail_table;
    tail_table.config = config;
    tail_table.config.emplace_back("table", "tail");
    tail_table.columns = {"S", "count"};
    const auto hist = cens.size_histogram();
    std::uint64_t running = 0;
    std::vector<std::pair<std::uint64_t, std::uint64_t>> tail;
    for (std::uint64_t s = n; s >= 1; --s) {
        running += hist[s];
        tail.emplace_back(s, running);
    }
    for (auto it = tail.rbegin(); it != tail.rend(); ++it)
        if (it->second > 0)
            tail_table.rows.push_back(
                {static_cast<double>(it->first), static_cast<double>(it->second)});

    const std::string census_path = census_out.empty() ? derive_census_path(opts.out) : census_out;
    write_table(opts.out, tail_table, opts.format);
    write_table(census_path, census_table, opts.format);
    return 0;
}

int run_tail_cmd(double r, std::uint64_t n, std::uint64_t reps, const std::string& s_grid_text,
                 const CommonOpts& opts) {
    const auto grid = s_grid_text.empty() ? default_s_grid(r, n) : parse_double_list(s_grid_text);
    const auto table = run_tail_experiment(r, n, reps, grid, opts.seed, opts.threads);
    Table out;
    out.config = {{"command", "tail"},        {"r", format_g17(r)},
                  {"n", std::to_string(n)},   {"replicates", std::to_string(reps)},
                  {"seed", std::to_string(opts.seed)}, {"s_grid", list_to_string(grid)},
                  {"format", opts.format}};
    out.columns = {"S", "mean_F", "stderr", "g"};
    for (const auto& row : table.rows)
        out.rows.push_back({row.s, row.mean_f, row.stderr_f, row.prediction});
    write_table(opts.out, out, opts.format);
    return 0;
}

int run_coupling_cmd(double r, const std::string& n_list_text, std::uint64_t reps,
                     const CommonOpts& opts) {
    const auto n_list = parse_u64_list(n_list_text);
    const auto report = run_coupling_experiment(r, n_list, reps, opts.seed, opts.threads);
    Table out;
    out.config = {{"command", "coupling"},
                  {"r", format_g17(r)},
                  {"n_list", n_list_text},
                  {"replicates", std::to_string(reps)},
                  {"seed", std::to_string(opts.seed)},
                  {"format", opts.format}};
    out.columns = {"n", "mean_gap", "stderr", "bound", "ratio"};
    for (const auto& row : report.rows)
        out.rows.push_back({static_cast<double>(row.n), row.mean_gap, row.stderr_gap, row.bound,
                            row.ratio});
    write_table(opts.out, out, opts.format);
    return 0;
}

int run_largest_cmd(double r, std::uint64_t n, std::uint64_t reps, std::uint64_t k,
                    std::uint64_t ref_samples, const CommonOpts& opts) {
    const auto report =
        run_largest_family_experiment(r, n, reps, k, opts.seed, opts.threads, ref_samples);
    Table out;
    out.config = {{"command", "largest"},
                  {"r", format_g17(r)},
                  {"n", std::to_string(n)},
                  {"replicates", std::to_string(reps)},
                  {"k", std::to_string(k)},
                  {"ref_samples", std::to_string(ref_samples)},
                  {"seed", std::to_string(opts.seed)},
                  {"format", opts.format},
                  {"retained", std::to_string(report.retained)},
                  {"ks_d", format_g17(report.ks.d)},
                  {"ks_p", format_g17(report.ks.p_value)}};
    for (const auto& m : report.moments) {
        const std::string tag = "m" + std::to_string(static_cast<int>(m.order));
        out.config.emplace_back(tag + "_empirical", format_g17(m.empirical));
        out.config.emplace_back(tag + "_stderr", format_g17(m.empirical_se));
        out.config.emplace_back(tag + "_reference", format_g17(m.reference));
    }
    out.columns = {"sample", "scaled_size"};
    for (std::size_t i = 0; i < report.scaled_samples.size(); ++i)
        out.rows.push_back({static_cast<double>(i), report.scaled_samples[i]});
    write_table(opts.out, out, opts.format);
    return 0;
}

int run_decay_cmd(double r, std::uint64_t n, std::uint64_t reps, const std::string& x_grid_text,
                  const CommonOpts& opts) {
    const auto grid =
        x_grid_text.empty() ? std::vector<double>{1.0, 1.5, 2.0, 2.5, 3.0}
                            : parse_double_list(x_grid_text);
    const auto table = run_tail_decay_experiment(r, n, reps, grid, opts.seed, opts.threads);
    Table out;
    out.config = {{"command", "decay"},       {"r", format_g17(r)},
                  {"n", std::to_string(n)},   {"replicates", std::to_string(reps)},
                  {"seed", std::to_string(opts.seed)}, {"x_grid", list_to_string(grid)},
                  {"format", opts.format}};
    out.columns = {"x", "estimate", "stderr"};
    for (const auto& row : table.rows) out.rows.push_back({row.x, row.estimate, row.stderr_e});
    write_table(opts.out, out, opts.format);
    return 0;
}

int run_crp_cmd(double alpha, double theta, std::uint64_t n, std::uint64_t reps,
                const CommonOpts& opts) {
    CrpParams params{alpha, theta};
    params.validate();
    Table out;
    out.config = {{"command", "crp"},
                  {"alpha", format_g17(alpha)},
                  {"theta", format_g17(theta)},
                  {"n", std::to_string(n)},
                  {"replicates", std::to_string(reps)},
                  {"seed", std::to_string(opts.seed)},
                  {"format", opts.format}};
    out.columns = {"replicate", "tables", "largest_block"};
    for (std::uint64_t rep = 0; rep < reps; ++rep) {
        const auto p = simulate_crp(params, n, mix64(opts.seed, rep));
        std::uint64_t largest = 0;
        for (const auto& b : p.blocks) largest = std::max<std::uint64_t>(largest, b.size());
        out.rows.push_back({static_cast<double>(rep), static_cast<double>(p.block_count()),
                            static_cast<double>(largest)});
    }
    write_table(opts.out, out, opts.format);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"duplication-model simulator and exact-law evaluators"};
    app.set_version_flag("--version", std::string("yulefam v") + yulefam::version);
    app.set_config("--config", "", "plain key=value config file (flags win)");
    app.require_subcommand(1);

    // simulate
    auto* sim = app.add_subcommand("simulate", "one run: family census + tail table");
    double sim_r = 0.5;
    std::uint64_t sim_n = 1000;
    std::string sim_census_out;
    CommonOpts sim_opts;
    sim->add_option("--r", sim_r, "new-family probability in [0,1]")->required();
    sim->add_option("--n", sim_n, "final population size")->required();
    sim->add_option("--census-out", sim_census_out,
                    "census output path (default: <out>-census.<ext>)");
    add_common(sim, sim_opts);

    // tail
    auto* tail = app.add_subcommand("tail", "Monte Carlo tail counts vs the g(S) prediction");
    double tail_r = 0.5;
    std::uint64_t tail_n = 10000, tail_reps = 1000;
    std::string tail_grid;
    CommonOpts tail_opts;
    tail->add_option("--r", tail_r)->required();
    tail->add_option("--n", tail_n)->required();
    tail->add_option("--reps", tail_reps, "replicates")->required()
        ->check(CLI::PositiveNumber);
    tail->add_option("--s-grid", tail_grid, "comma list of S values (default geometric)");
    add_common(tail, tail_opts);

    // coupling
    auto* coup = app.add_subcommand("coupling", "coupling gap vs the 5/sqrt(N) bound");
    double coup_r = 0.5;
    std::string coup_n_list = "100,400,1600,6400";
    std::uint64_t coup_reps = 1000;
    CommonOpts coup_opts;
    coup->add_option("--r", coup_r)->required();
    coup->add_option("--n-list", coup_n_list, "comma list of population sizes");
    coup->add_option("--reps", coup_reps)->required()->check(CLI::PositiveNumber);
    add_common(coup, coup_opts);

    // largest
    auto* larg = app.add_subcommand("largest", "scaled family-k size vs the Mittag-Leffler law");
    double larg_r = 0.5;
    std::uint64_t larg_n = 100000, larg_reps = 1000, larg_k = 1, larg_ref = 200000;
    CommonOpts larg_opts;
    larg->add_option("--r", larg_r)->required();
    larg->add_option("--n", larg_n)->required();
    larg->add_option("--reps", larg_reps)->required()->check(CLI::PositiveNumber);
    larg->add_option("--k", larg_k, "family index (k >= 2 conditions on founding)");
    larg->add_option("--ref-samples", larg_ref, "reference-oracle sample size for k >= 2");
    add_common(larg, larg_opts);

    // decay
    auto* dec = app.add_subcommand("decay", "families above x N^{1-r}: superexponential decay");
    double dec_r = 0.5;
    std::uint64_t dec_n = 10000, dec_reps = 1000;
    std::string dec_grid;
    CommonOpts dec_opts;
    dec->add_option("--r", dec_r)->required();
    dec->add_option("--n", dec_n)->required();
    dec->add_option("--reps", dec_reps)->required()->check(CLI::PositiveNumber);
    dec->add_option("--x-grid", dec_grid, "comma list of x values (default 1,1.5,2,2.5,3)");
    add_common(dec, dec_opts);

    // crp
    auto* crp = app.add_subcommand("crp", "two-parameter Chinese restaurant partitions");
    double crp_alpha = 0.0, crp_theta = 1.0;
    std::uint64_t crp_n = 100, crp_reps = 1;
    CommonOpts crp_opts;
    crp->add_option("--alpha", crp_alpha)->required();
    crp->add_option("--theta", crp_theta)->required();
    crp->add_option("--n", crp_n, "customers")->required();
    crp->add_option("--reps", crp_reps)->check(CLI::PositiveNumber);
    add_common(crp, crp_opts);

    // partition-prob
    auto* pp = app.add_subcommand("partition-prob", "exact partition probability");
    std::string pp_model = "dup", pp_blocks;
    double pp_r = 0.5, pp_theta = 1.0;
    bool pp_log = false;
    pp->add_option("--model", pp_model)->check(CLI::IsMember({"dup", "ewens"}));
    pp->add_option("--r", pp_r, "duplication parameter");
    pp->add_option("--theta", pp_theta, "Ewens parameter");
    pp->add_option("--blocks", pp_blocks, "partition, e.g. \"1,2|3\"")->required();
    pp->add_flag("--log", pp_log, "print the log probability");

    // eval
    auto* eval = app.add_subcommand("eval", "print one evaluator value (15 significant digits)");
    eval->require_subcommand(1);
    double ev_r = 0.5, ev_alpha = 0.5, ev_x = 1.0, ev_m = 1.0, ev_a = 0.5, ev_n = 10000,
           ev_s = 10.0;
    std::uint64_t ev_k = 2;
    auto* ev_g = eval->add_subcommand("g", "g(S) = r Gamma((2-r)/(1-r)) N S^{-1/(1-r)}");
    ev_g->add_option("--r", ev_r)->required();
    ev_g->add_option("--n", ev_n)->required();
    ev_g->add_option("--s", ev_s)->required();
    auto* ev_mld = eval->add_subcommand("ml-density", "Mittag-Leffler density");
    ev_mld->add_option("--alpha", ev_alpha)->required();
    ev_mld->add_option("--x", ev_x)->required();
    auto* ev_mlc = eval->add_subcommand("ml-cdf", "Mittag-Leffler CDF");
    ev_mlc->add_option("--alpha", ev_alpha)->required();
    ev_mlc->add_option("--x", ev_x)->required();
    auto* ev_mlm = eval->add_subcommand("ml-moment", "E[M^m]");
    ev_mlm->add_option("--alpha", ev_alpha)->required();
    ev_mlm->add_option("--m", ev_m)->required();
    auto* ev_zm = eval->add_subcommand("z-moment", "E[Z_k^m]");
    ev_zm->add_option("--r", ev_r)->required();
    ev_zm->add_option("--k", ev_k)->required();
    ev_zm->add_option("--m", ev_m)->required();
    auto* ev_st = eval->add_subcommand("stick-tail", "P(W_k >= a) = r (1-a)^{k-1}");
    ev_st->add_option("--r", ev_r)->required();
    ev_st->add_option("--k", ev_k)->required();
    ev_st->add_option("--a", ev_a)->required();
    auto* ev_ey = eval->add_subcommand("expected-y", "E[Y_k] = prod_{j>k} (1 - r/j)");
    ev_ey->add_option("--r", ev_r)->required();
    ev_ey->add_option("--n", ev_n)->required();
    ev_ey->add_option("--k", ev_k)->required();
    auto* ev_tc = eval->add_subcommand("tail-constants", "A1 and A2");
    ev_tc->add_option("--alpha", ev_alpha)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (sim->parsed()) return run_simulate(sim_r, sim_n, sim_opts, sim_census_out);
        if (tail->parsed()) return run_tail_cmd(tail_r, tail_n, tail_reps, tail_grid, tail_opts);
        if (coup->parsed()) return run_coupling_cmd(coup_r, coup_n_list, coup_reps, coup_opts);
        if (larg->parsed())
            return run_largest_cmd(larg_r, larg_n, larg_reps, larg_k, larg_ref, larg_opts);
        if (dec->parsed()) return run_decay_cmd(dec_r, dec_n, dec_reps, dec_grid, dec_opts);
        if (crp->parsed()) return run_crp_cmd(crp_alpha, crp_theta, crp_n, crp_reps, crp_opts);
        if (pp->parsed()) {
            const auto partition = parse_partition(pp_blocks);
            double v;
            if (pp_model == "dup")
                v = pp_log ? dup_partition_log_prob(pp_r, partition)
                           : dup_partition_prob(pp_r, partition);
            else
                v = pp_log ? ewens_log_prob(pp_theta, partition) : ewens_prob(pp_theta, partition);
            print_value(v);
            return 0;
        }
        if (eval->parsed()) {
            if (ev_g->parsed()) print_value(g_of_s(ev_r, ev_n, ev_s));
            else if (ev_mld->parsed()) print_value(ml_density(ev_alpha, ev_x));
            else if (ev_mlc->parsed()) print_value(ml_cdf(ev_alpha, ev_x));
            else if (ev_mlm->parsed()) print_value(ml_moment(ev_alpha, ev_m));
            else if (ev_zm->parsed()) print_value(z_moment(ev_r, ev_k, ev_m));
            else if (ev_st->parsed()) print_value(stick_tail_prob(ev_r, ev_k, ev_a));
            else if (ev_ey->parsed())
                print_value(expected_y(ev_r, static_cast<std::uint64_t>(ev_n), ev_k));
            else if (ev_tc->parsed()) {
                const auto tc = tail_constants(ev_alpha);
                std::printf("%.15g %.15g\n", tc.a1, tc.a2);
            }
            return 0;
        }
    } catch (const yulefam::IoError& e) {
        std::cerr << "yulefam: " << e.what() << "\n";
        return 4;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "yulefam: " << e.what() << "\n";
        return 4;
    } catch (const std::domain_error& e) {
        std::cerr << "yulefam: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "yulefam: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "yulefam: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
