#include "hvdc/io.hpp"
#include "hvdc/market.hpp"
#include "hvdc/pipeline.hpp"
#include "hvdc/sizing.hpp"
#include "hvdc/synth.hpp"
#include "hvdc/year.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json load_json_file(const fs::path& path, const char* what) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error(std::string("cannot open ") + what + " file " + path.string());
    }
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw std::runtime_error(path.string() + ": " + e.what());
    }
}

void write_json_file(const json& doc, const fs::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    out << doc.dump(2) << "\n";
}

fs::path ensure_out_dir(const std::string& out) {
    fs::path dir(out);
    fs::create_directories(dir);
    return dir;
}

void require_set(const std::string& value, const char* flag) {
    if (value.empty()) {
        throw std::runtime_error(std::string(flag) +
                                 " is required (flag or config file entry)");
    }
}

hvdc::market::LossMode parse_mode_or_throw(const std::string& text) {
    const auto mode = hvdc::market::parse_loss_mode(text);
    if (!mode) {
        throw std::runtime_error("unknown loss mode '" + text +
                                 "' (expected none|linear-hvdc|pwl-hvdc|pwl-all)");
    }
    return *mode;
}

hvdc::freq::FrequencyStudy load_study(const fs::path& path) {
    return hvdc::freq::study_from_json(load_json_file(path, "frequency model"));
}

void write_traj_csv(const hvdc::freq::Trajectory& traj, const fs::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    out << "t_s,f_hz,p_fcr_mw,p_ffr_mw,p_epc_mw\n";
    for (const auto& s : traj.samples) {
        out << hvdc::fmt_double(s.t_s) << ',' << hvdc::fmt_double(s.f_hz) << ','
            << hvdc::fmt_double(s.p_fcr_mw) << ',' << hvdc::fmt_double(s.p_ffr_mw) << ','
            << hvdc::fmt_double(s.p_epc_mw) << '\n';
    }
}

void write_fig2_csv(const hvdc::freq::SizingSweep& sweep, const fs::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    out << "ek_gws,di_reduction_mw,ffr_mw,epc_mw\n";
    for (std::size_t i = 0; i < sweep.kinetic_energy_gws.size(); ++i) {
        out << hvdc::fmt_double(sweep.kinetic_energy_gws[i]) << ','
            << hvdc::fmt_double(sweep.di_reduction_mw[i]) << ','
            << hvdc::fmt_double(sweep.ffr_mw[i]) << ','
            << hvdc::fmt_double(sweep.epc_mw[i]) << '\n';
    }
}

// merges --config file values (keys are flag names with '-' as '_') into
// options the command line left unset
void apply_config_defaults(CLI::App* cmd, const json& config) {
    for (const auto& opt : cmd->get_options()) {
        const std::string name = opt->get_lnames().empty() ? "" : opt->get_lnames().front();
        if (name.empty() || opt->count() > 0) {
            continue;
        }
        std::string key = name;
        for (auto& ch : key) {
            if (ch == '-') {
                ch = '_';
            }
        }
        if (!config.contains(key)) {
            continue;
        }
        const json& v = config[key];
        opt->add_result(v.is_string() ? v.get<std::string>() : v.dump());
        opt->run_callback();
    }
}

struct MarketArgs {
    std::string network;
    std::string bids;
    std::string mode = "none";
    int segments = 5;
    std::size_t hour = 0;
    int workers = 1;
    std::string reference;
    std::string alternative;
    std::string out = ".";
};

int cmd_market_clear(const MarketArgs& args) {
    require_set(args.network, "--network");
    require_set(args.bids, "--bids");
    const auto network = hvdc::load_network(args.network);
    const auto bids = hvdc::load_bids(args.bids);
    if (args.hour >= bids.size()) {
        throw std::runtime_error("hour " + std::to_string(args.hour) +
                                 " outside the bid horizon of " + std::to_string(bids.size()));
    }
    hvdc::market::MarketInstance inst;
    inst.hour = args.hour;
    inst.network = &network;
    inst.bids = bids[args.hour];
    inst.options = {parse_mode_or_throw(args.mode), args.segments};
    const auto solution = hvdc::market::clear(inst);
    const auto dir = ensure_out_dir(args.out);
    write_json_file(hvdc::market::solution_to_json(solution), dir / "solution.json");
    if (solution.status != hvdc::market::SolveStatus::Optimal) {
        throw std::runtime_error("hour " + std::to_string(args.hour) + " is infeasible; see " +
                                 (dir / "solution.json").string());
    }
    return 0;
}

int cmd_market_run_year(const MarketArgs& args) {
    require_set(args.network, "--network");
    require_set(args.bids, "--bids");
    const auto network = hvdc::load_network(args.network);
    const auto bids = hvdc::load_bids(args.bids);
    const hvdc::market::ClearingOptions options{parse_mode_or_throw(args.mode), args.segments};
    const auto run = hvdc::market::run_year(network, bids, options, args.workers);
    const auto dir = ensure_out_dir(args.out);
    write_json_file(hvdc::market::report_to_json(run.report), dir / "report.json");
    hvdc::market::write_losses_csv(run, dir / "losses.csv");
    if (!run.report.infeasible_hours.empty()) {
        json err = {{"infeasible_hours", run.report.infeasible_hours}, {"kind", "coverage"}};
        std::cerr << err.dump() << "\n";
    }
    return 0;
}

int cmd_market_compare(const MarketArgs& args) {
    require_set(args.reference, "--reference");
    require_set(args.alternative, "--alternative");
    const auto ref =
        hvdc::market::report_from_json(load_json_file(args.reference, "reference report"));
    const auto alt =
        hvdc::market::report_from_json(load_json_file(args.alternative, "alternative report"));
    const auto record = hvdc::market::compare(ref, alt);
    const auto dir = ensure_out_dir(args.out);
    write_json_file(hvdc::market::savings_to_json(record), dir / "savings.json");
    return 0;
}

struct FreqArgs {
    std::string model;
    double horizon_s = 60.0;
    double dt_s = 0.01;
    std::string action = "di";
    double ek_min = 80.0;
    double ek_max = 240.0;
    double ek_step = 10.0;
    int workers = 1;
    std::string out = ".";
};

int cmd_freq_simulate(const FreqArgs& args) {
    require_set(args.model, "--model");
    const auto study = load_study(args.model);
    const auto traj = hvdc::freq::simulate(study.model, study.disturbance, study.ffr,
                                           study.epc, {args.horizon_s, args.dt_s});
    const auto dir = ensure_out_dir(args.out);
    write_traj_csv(traj, dir / "traj.csv");
    json summary = {{"nadir_hz", traj.nadir_hz},
                    {"nadir_time_s", traj.nadir_time_s},
                    {"load_shed", traj.load_shed},
                    {"secure", hvdc::freq::nadir_ok(traj, study.model.nadir_floor_hz)}};
    write_json_file(summary, dir / "summary.json");
    return 0;
}

int cmd_freq_threshold(const FreqArgs& args) {
    require_set(args.model, "--model");
    const auto study = load_study(args.model);
    const auto res = hvdc::freq::required_kinetic_energy(
        study.model, study.disturbance, study.ffr, study.epc, {args.horizon_s, args.dt_s});
    const auto dir = ensure_out_dir(args.out);
    json doc = {{"reachable", res.reachable},
                {"required_kinetic_energy_gws", res.reachable ? json(res.value) : json()},
                {"nadir_floor_hz", study.model.nadir_floor_hz}};
    write_json_file(doc, dir / "threshold.json");
    return 0;
}

int cmd_freq_size(const FreqArgs& args) {
    require_set(args.model, "--model");
    const auto study = load_study(args.model);
    const auto action = hvdc::freq::parse_action(args.action);
    if (!action) {
        throw std::runtime_error("unknown action '" + args.action + "' (di|ffr|epc)");
    }
    const auto tmpl = *action == hvdc::freq::RemedyAction::Epc
                          ? study.epc.value_or(hvdc::freq::default_epc_template())
                          : study.ffr.value_or(hvdc::freq::default_ffr_template());
    const auto res = hvdc::freq::size_action(study.model, study.disturbance, *action, tmpl,
                                             {args.horizon_s, args.dt_s});
    const auto dir = ensure_out_dir(args.out);
    json doc = {{"action", hvdc::freq::to_string(*action)},
                {"reachable", res.reachable},
                {"required_mw", res.reachable ? json(res.value) : json()},
                {"kinetic_energy_gws", study.model.kinetic_energy_gws}};
    write_json_file(doc, dir / "sizing.json");
    return 0;
}

int cmd_freq_sweep(const FreqArgs& args) {
    require_set(args.model, "--model");
    if (args.ek_step <= 0.0 || args.ek_max < args.ek_min) {
        throw std::runtime_error("sweep grid must satisfy ek-min <= ek-max and ek-step > 0");
    }
    const auto study = load_study(args.model);
    std::vector<double> grid;
    for (double ek = args.ek_min; ek <= args.ek_max + 1e-9; ek += args.ek_step) {
        grid.push_back(ek);
    }
    const auto sweep = hvdc::freq::sweep_actions(
        study.model, study.disturbance,
        study.ffr.value_or(hvdc::freq::default_ffr_template()),
        study.epc.value_or(hvdc::freq::default_epc_template()), grid,
        {args.horizon_s, args.dt_s}, args.workers);
    const auto dir = ensure_out_dir(args.out);
    write_fig2_csv(sweep, dir / "fig2.csv");
    return 0;
}

struct PlanArgs {
    std::string ek;
    std::string model;
    std::string strategy = "di";
    std::size_t pad = 2;
    std::size_t merge_gap = 6;
    double horizon_s = 60.0;
    double dt_s = 0.01;
    int workers = 1;
    std::string out = ".";
};

int cmd_plan_build(const PlanArgs& args) {
    require_set(args.ek, "--ek");
    require_set(args.model, "--model");
    const auto ek = hvdc::load_series(args.ek);
    if (ek.unit != hvdc::SeriesUnit::Gws) {
        throw std::runtime_error("kinetic-energy series must carry #unit=GWs");
    }
    const auto study = load_study(args.model);
    const auto action = hvdc::freq::parse_action(args.strategy);
    if (!action) {
        throw std::runtime_error("unknown strategy '" + args.strategy + "' (di|ffr|epc)");
    }
    double ek_min = ek.values.front();
    for (double v : ek.values) {
        ek_min = std::min(ek_min, v);
    }
    const auto table = hvdc::freq::build_sizing_table(
        study.model, study.disturbance,
        study.ffr.value_or(hvdc::freq::default_ffr_template()),
        study.epc.value_or(hvdc::freq::default_epc_template()), ek_min,
        {args.horizon_s, args.dt_s}, args.workers);
    auto sizing = [&](std::size_t hour) {
        return table.requirement(*action, ek.values[hour]);
    };
    hvdc::plan::RemedialPlan remedial;
    if (*action == hvdc::freq::RemedyAction::DiReduction) {
        remedial = hvdc::plan::plan_di_reduction(ek, table.threshold_gws, sizing, args.pad,
                                                 args.merge_gap);
    } else {
        remedial = hvdc::plan::plan_stepped(ek, table.threshold_gws, sizing, *action);
    }
    const auto dir = ensure_out_dir(args.out);
    auto doc = hvdc::plan::plan_to_json(remedial);
    doc["threshold_gws"] = table.threshold_gws;
    write_json_file(doc, dir / "plan.json");
    return 0;
}

struct CostArgs {
    std::string ek;
    std::string model;
    std::string prices;
    std::size_t pad = 2;
    std::size_t merge_gap = 6;
    double horizon_s = 60.0;
    double dt_s = 0.01;
    int workers = 1;
    std::string out = ".";
};

int cmd_cost_run(const CostArgs& args) {
    require_set(args.ek, "--ek");
    require_set(args.model, "--model");
    require_set(args.prices, "--prices");
    hvdc::cba::StudyInputs inputs;
    inputs.kinetic_energy = hvdc::load_series(args.ek);
    inputs.study = load_study(args.model);
    inputs.prices = hvdc::cost::prices_from_json(load_json_file(args.prices, "prices"));
    inputs.pad_h = args.pad;
    inputs.merge_gap_h = args.merge_gap;
    inputs.sim = {args.horizon_s, args.dt_s};
    inputs.workers = args.workers;
    const auto result = hvdc::cba::run_study(inputs);
    const auto dir = ensure_out_dir(args.out);
    hvdc::cba::write_table1_csv(result, dir / "table1.csv");
    hvdc::cba::write_fig3_csv(result, dir / "fig3.csv");
    json doc = hvdc::cost::cost_report_to_json(result.costs);
    doc["threshold_gws"] = result.threshold_gws;
    doc["deficit_hours"] = result.deficit_hours;
    write_json_file(doc, dir / "cba.json");
    return 0;
}

struct SynthArgs {
    std::string spec;
    std::uint64_t seed = 42;
    int zones = 6;
    std::size_t hours = 8760;
    double dry_factor = 1.0;
    std::string out = ".";
};

int cmd_synth_make(const SynthArgs& args, bool seed_set, bool zones_set, bool hours_set,
                   bool dry_set) {
    hvdc::synth::SyntheticSpec spec;
    if (!args.spec.empty()) {
        spec = hvdc::synth::spec_from_json(load_json_file(args.spec, "synthetic spec"));
    }
    if (seed_set) spec.seed = args.seed;
    if (zones_set) spec.zones = args.zones;
    if (hours_set) spec.horizon_hours = args.hours;
    if (dry_set) spec.dry_factor = args.dry_factor;
    const auto dir = ensure_out_dir(args.out);
    hvdc::synth::generate(spec, dir);
    write_json_file(hvdc::synth::spec_to_json(spec), dir / "synth_spec.json");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Nordic HVDC cost-benefit study toolkit: zonal market clearing with "
                 "transmission-loss factors, frequency-security simulation, and remedial "
                 "action pricing"};
    app.require_subcommand(1);

    std::string config_path;
    app.add_option("--config", config_path,
                   "JSON file whose keys (flag names with '-' as '_') provide defaults for "
                   "any unset option");

    MarketArgs market_args;
    auto* market = app.add_subcommand("market", "Day-ahead clearing with loss factors");
    market->require_subcommand(1);
    auto* clear = market->add_subcommand("clear", "Clear a single hour");
    clear->add_option("--network", market_args.network, "network.json");
    clear->add_option("--bids", market_args.bids, "bids.csv");
    clear->add_option("--hour", market_args.hour, "hour index")->capture_default_str();
    clear->add_option("--mode", market_args.mode, "none|linear-hvdc|pwl-hvdc|pwl-all")
        ->capture_default_str();
    clear->add_option("--segments", market_args.segments, "piecewise-linear segment count")
        ->capture_default_str();
    clear->add_option("--out", market_args.out, "output directory")->capture_default_str();

    auto* run_year = market->add_subcommand("run-year", "Clear every hour of the horizon");
    run_year->add_option("--network", market_args.network, "network.json");
    run_year->add_option("--bids", market_args.bids, "bids.csv");
    run_year->add_option("--mode", market_args.mode, "none|linear-hvdc|pwl-hvdc|pwl-all")
        ->capture_default_str();
    run_year->add_option("--segments", market_args.segments, "piecewise-linear segment count")
        ->capture_default_str();
    run_year->add_option("--workers", market_args.workers, "worker threads")
        ->capture_default_str();
    run_year->add_option("--out", market_args.out, "output directory")->capture_default_str();

    auto* compare = market->add_subcommand("compare", "Savings of one report over another");
    compare->add_option("--reference", market_args.reference, "reference report.json")
        ;
    compare->add_option("--alternative", market_args.alternative, "alternative report.json")
        ;
    compare->add_option("--out", market_args.out, "output directory")->capture_default_str();

    FreqArgs freq_args;
    auto* freq = app.add_subcommand("freq", "Post-disturbance frequency studies");
    freq->require_subcommand(1);
    auto* simulate = freq->add_subcommand("simulate", "Integrate one disturbance trajectory");
    simulate->add_option("--model", freq_args.model, "model.json");
    simulate->add_option("--horizon", freq_args.horizon_s, "simulation horizon [s]")
        ->capture_default_str();
    simulate->add_option("--dt", freq_args.dt_s, "integration step [s]")
        ->capture_default_str();
    simulate->add_option("--out", freq_args.out, "output directory")->capture_default_str();

    auto* threshold = freq->add_subcommand(
        "threshold", "Minimal kinetic energy meeting the nadir floor");
    threshold->add_option("--model", freq_args.model, "model.json");
    threshold->add_option("--horizon", freq_args.horizon_s, "simulation horizon [s]")
        ->capture_default_str();
    threshold->add_option("--dt", freq_args.dt_s, "integration step [s]")
        ->capture_default_str();
    threshold->add_option("--out", freq_args.out, "output directory")->capture_default_str();

    auto* size = freq->add_subcommand("size", "Smallest securing action at the model inertia");
    size->add_option("--model", freq_args.model, "model.json");
    size->add_option("--action", freq_args.action, "di|ffr|epc")->capture_default_str();
    size->add_option("--horizon", freq_args.horizon_s, "simulation horizon [s]")
        ->capture_default_str();
    size->add_option("--dt", freq_args.dt_s, "integration step [s]")->capture_default_str();
    size->add_option("--out", freq_args.out, "output directory")->capture_default_str();

    auto* sweep = freq->add_subcommand("sweep", "Action sizes over a kinetic-energy grid");
    sweep->add_option("--model", freq_args.model, "model.json");
    sweep->add_option("--ek-min", freq_args.ek_min, "grid start [GWs]")->capture_default_str();
    sweep->add_option("--ek-max", freq_args.ek_max, "grid end [GWs]")->capture_default_str();
    sweep->add_option("--ek-step", freq_args.ek_step, "grid step [GWs]")
        ->capture_default_str();
    sweep->add_option("--workers", freq_args.workers, "worker threads")->capture_default_str();
    sweep->add_option("--horizon", freq_args.horizon_s, "simulation horizon [s]")
        ->capture_default_str();
    sweep->add_option("--dt", freq_args.dt_s, "integration step [s]")->capture_default_str();
    sweep->add_option("--out", freq_args.out, "output directory")->capture_default_str();

    PlanArgs plan_args;
    auto* plan = app.add_subcommand("plan", "Remedial plans from a kinetic-energy series");
    plan->require_subcommand(1);
    auto* build = plan->add_subcommand("build", "Build one strategy's plan");
    build->add_option("--ek", plan_args.ek, "ek.csv with #unit=GWs");
    build->add_option("--model", plan_args.model, "model.json");
    build->add_option("--strategy", plan_args.strategy, "di|ffr|epc")->capture_default_str();
    build->add_option("--pad", plan_args.pad, "hours prolonged on each side of a DI event")
        ->capture_default_str();
    build->add_option("--merge-gap", plan_args.merge_gap,
                      "merge DI events separated by at most this many hours")
        ->capture_default_str();
    build->add_option("--workers", plan_args.workers, "worker threads")->capture_default_str();
    build->add_option("--out", plan_args.out, "output directory")->capture_default_str();

    CostArgs cost_args;
    auto* cost = app.add_subcommand("cost", "Euro costs of the remedial strategies");
    cost->require_subcommand(1);
    auto* cost_run = cost->add_subcommand("run", "Full plan-and-price study");
    cost_run->add_option("--ek", cost_args.ek, "ek.csv with #unit=GWs");
    cost_run->add_option("--model", cost_args.model, "model.json");
    cost_run->add_option("--prices", cost_args.prices, "prices.json");
    cost_run->add_option("--pad", cost_args.pad, "hours prolonged on each side of a DI event")
        ->capture_default_str();
    cost_run->add_option("--merge-gap", cost_args.merge_gap,
                         "merge DI events separated by at most this many hours")
        ->capture_default_str();
    cost_run->add_option("--workers", cost_args.workers, "worker threads")
        ->capture_default_str();
    cost_run->add_option("--out", cost_args.out, "output directory")->capture_default_str();

    SynthArgs synth_args;
    auto* synth = app.add_subcommand("synth", "Seeded synthetic dataset generation");
    synth->require_subcommand(1);
    auto* make =
        synth->add_subcommand("make", "Write network.json, bids.csv, ek.csv, prices.json");
    make->add_option("--spec", synth_args.spec, "synthetic spec JSON (flags override)");
    auto* seed_opt =
        make->add_option("--seed", synth_args.seed, "generator seed")->capture_default_str();
    auto* zones_opt = make->add_option("--zones", synth_args.zones, "zone count (2-6)")
                          ->capture_default_str();
    auto* hours_opt =
        make->add_option("--hours", synth_args.hours, "horizon hours")->capture_default_str();
    auto* dry_opt = make->add_option("--dry-factor", synth_args.dry_factor,
                                     "hydrological scaling of kinetic energy")
                        ->capture_default_str();
    make->add_option("--out", synth_args.out, "output directory")->capture_default_str();

    try {
        app.parse(argc, argv);
        if (!config_path.empty()) {
            const json config = load_json_file(config_path, "config");
            for (auto* sub : {clear, run_year, compare, simulate, threshold, size, sweep,
                              build, cost_run, make}) {
                if (sub->parsed()) {
                    apply_config_defaults(sub, config);
                }
            }
        }

        if (clear->parsed()) return cmd_market_clear(market_args);
        if (run_year->parsed()) return cmd_market_run_year(market_args);
        if (compare->parsed()) return cmd_market_compare(market_args);
        if (simulate->parsed()) return cmd_freq_simulate(freq_args);
        if (threshold->parsed()) return cmd_freq_threshold(freq_args);
        if (size->parsed()) return cmd_freq_size(freq_args);
        if (sweep->parsed()) return cmd_freq_sweep(freq_args);
        if (build->parsed()) return cmd_plan_build(plan_args);
        if (cost_run->parsed()) return cmd_cost_run(cost_args);
        if (make->parsed()) {
            return cmd_synth_make(synth_args, seed_opt->count() > 0, zones_opt->count() > 0,
                                  hours_opt->count() > 0, dry_opt->count() > 0);
        }
        return 0;
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            return app.exit(e);  // --help and friends
        }
        json err = {{"error", e.what()}, {"kind", "usage"}};
        std::cerr << err.dump() << "\n";
        return e.get_exit_code();
    } catch (const std::exception& e) {
        json err = {{"error", e.what()}, {"kind", "runtime"}};
        std::cerr << err.dump() << "\n";
        return 1;
    }
}
