// Command-line front end: simulate labelled datasets, infer faction
// timelines, evaluate against ground truth, sweep window lengths, and run
// the geometric baseline through the same faction pipeline.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "mflica/json_io.hpp"

namespace {

void write_json(const nlohmann::json& j, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << j.dump(2) << "\n";
}

nlohmann::json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    nlohmann::json j;
    in >> j;
    return j;
}

std::vector<std::string> dataset_ids(const mflica::Dataset& d) {
    std::vector<std::string> ids;
    for (const auto& s : d.series) ids.push_back(s.id);
    return ids;
}

void write_size_ratio_csv(const mflica::FactionTimeline& timeline,
                          const std::vector<std::string>& ids, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "t,initiator,faction_size_ratio\n";
    for (const auto& block : timeline.blocks)
        for (std::size_t t = block.t_begin; t <= block.t_end; ++t)
            for (const auto& f : block.factions)
                out << t << ',' << ids[static_cast<std::size_t>(f.initiator)] << ',' << f.size_ratio << "\n";
}

void write_inference_outputs(const mflica::FactionTimeline& timeline,
                             const std::vector<std::string>& ids,
                             std::size_t omega, double sigma, const std::string& out_prefix) {
    const auto events = mflica::detect_merge_split(timeline);
    write_json(mflica::timeline_to_json(timeline, ids, events, omega, sigma), out_prefix + ".timeline.json");
    write_size_ratio_csv(timeline, ids, out_prefix + ".sizeratio.csv");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"leadership inference from time series"};
    app.require_subcommand(1);

    // simulate
    auto* sim_cmd = app.add_subcommand("simulate", "generate a labelled trajectory dataset");
    std::string model = "DM", event_type = "linear", sim_out;
    mflica::SimConfig config;
    sim_cmd->add_option("--model", model, "DM|HM|IC|CM")->capture_default_str();
    sim_cmd->add_option("--event-type", event_type, "linear|merge_split")->capture_default_str();
    sim_cmd->add_option("--n", config.n, "individuals")->capture_default_str();
    sim_cmd->add_option("--t-star", config.t_star, "series length (events*800)")->capture_default_str();
    sim_cmd->add_option("--events", config.events, "coordination events")->capture_default_str();
    sim_cmd->add_option("--ic-k", config.ic_k, "IC neighbour count")->capture_default_str();
    sim_cmd->add_option("--ic-rho", config.ic_rho, "IC activation probability")->capture_default_str();
    sim_cmd->add_option("--cm-informed", config.cm_informed, "informed individuals per faction")->capture_default_str();
    sim_cmd->add_option("--speed", config.speed, "step length")->capture_default_str();
    sim_cmd->add_option("--noise-std", config.noise_std, "motion noise std (default 0.05*speed)");
    sim_cmd->add_option("--seed", config.seed, "rng seed")->capture_default_str();
    sim_cmd->add_option("--out", sim_out, "output prefix")->required();

    // infer
    auto* infer_cmd = app.add_subcommand("infer", "infer factions, initiators and intervals");
    std::string infer_in, infer_out, network_out;
    double sigma = 0.5;
    std::size_t omega = 0;
    bool auto_omega = false;
    infer_cmd->add_option("--in", infer_in, "trajectory CSV")->required();
    infer_cmd->add_option("--sigma", sigma, "following-score threshold")->capture_default_str();
    auto* omega_opt = infer_cmd->add_option("--omega", omega, "window length");
    infer_cmd->add_flag("--auto-omega", auto_omega, "choose omega by coordination-measure sweep");
    infer_cmd->add_option("--network-out", network_out, "also write the dynamic network JSON");
    infer_cmd->add_option("--out", infer_out, "output prefix")->required();

    // evaluate
    auto* eval_cmd = app.add_subcommand("evaluate", "score a timeline against ground truth");
    std::string pred_path, truth_path, eval_out;
    eval_cmd->add_option("--pred", pred_path, "timeline JSON")->required();
    eval_cmd->add_option("--truth", truth_path, "ground-truth JSON")->required();
    eval_cmd->add_option("--out", eval_out, "report JSON")->required();

    // sweep-window
    auto* sweep_cmd = app.add_subcommand("sweep-window", "evaluate candidate window lengths");
    std::string sweep_in, sweep_out, candidates_arg;
    double sweep_sigma = 0.5;
    sweep_cmd->add_option("--in", sweep_in, "trajectory CSV")->required();
    sweep_cmd->add_option("--candidates", candidates_arg, "comma-separated omegas (default grid)");
    sweep_cmd->add_option("--sigma", sweep_sigma, "following-score threshold")->capture_default_str();
    sweep_cmd->add_option("--out", sweep_out, "result JSON (stdout when omitted)");

    // baseline-flock
    auto* flock_cmd = app.add_subcommand("baseline-flock", "geometric baseline through the faction pipeline");
    std::string flock_in, flock_out;
    mflica::FlockParams flock_params;
    flock_cmd->add_option("--in", flock_in, "trajectory CSV")->required();
    flock_cmd->add_option("--beta", flock_params.beta, "heading angle threshold (radians)")->capture_default_str();
    flock_cmd->add_option("--gamma", flock_params.gamma, "distance threshold (default 5*median step)");
    flock_cmd->add_option("--out", flock_out, "output prefix")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*sim_cmd) {
            config.model = mflica::model_from_string(model);
            config.event_type = mflica::event_type_from_string(event_type);
            auto [dataset, truth] = mflica::simulate(config);
            mflica::save_dataset(dataset, sim_out + ".csv");
            write_json(mflica::truth_to_json(truth), sim_out + ".truth.json");
            write_json(mflica::sim_config_to_json(config), sim_out + ".manifest.json");
        } else if (*infer_cmd) {
            const auto dataset = mflica::load_dataset(infer_in);
            const auto ids = dataset_ids(dataset);
            mflica::PipelineRun run;
            std::size_t used_omega = omega;
            if (auto_omega) {
                const auto sweep =
                    mflica::infer_window(dataset, mflica::default_window_candidates(dataset.length()), sigma, &run);
                used_omega = sweep.chosen;
            } else {
                if (omega_opt->count() == 0)
                    throw std::runtime_error("infer: pass --omega or --auto-omega");
                run = mflica::run_pipeline(dataset, omega, sigma);
            }
            write_inference_outputs(run.timeline, ids, used_omega, sigma, infer_out);
            if (!network_out.empty())
                write_json(mflica::dynamic_network_to_json(run.network, ids), network_out);
        } else if (*eval_cmd) {
            const auto loaded = mflica::timeline_from_json(read_json(pred_path));
            const auto truth = mflica::truth_from_json(read_json(truth_path));
            std::vector<int> ids;
            for (const auto& id : loaded.ids) ids.push_back(std::stoi(id));
            const auto report = mflica::evaluate(loaded.timeline, truth, ids);
            write_json(mflica::eval_report_to_json(report), eval_out);
        } else if (*sweep_cmd) {
            const auto dataset = mflica::load_dataset(sweep_in);
            std::vector<std::size_t> candidates;
            if (candidates_arg.empty()) {
                candidates = mflica::default_window_candidates(dataset.length());
            } else {
                std::stringstream ss(candidates_arg);
                std::string token;
                while (std::getline(ss, token, ',')) candidates.push_back(std::stoul(token));
            }
            const auto sweep = mflica::infer_window(dataset, candidates, sweep_sigma);
            const auto j = mflica::sweep_to_json(sweep);
            if (sweep_out.empty()) std::cout << j.dump(2) << "\n";
            else write_json(j, sweep_out);
        } else if (*flock_cmd) {
            const auto dataset = mflica::load_dataset(flock_in);
            const auto dyn = mflica::flock_dynamic_network(dataset, flock_params);
            const auto timeline = mflica::find_factions_and_initiators(dyn);
            write_inference_outputs(timeline, dataset_ids(dataset), 1, 0.0, flock_out);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
