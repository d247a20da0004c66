// Command-line front end: synth / train / eval / sar / report.
// Exit codes: 0 ok, 1 usage, 2 data or format problem, 3 numeric failure.

#include "fgl/experiment.hpp"
#include "fgl/io.hpp"

#include <CLI11.hpp>

#include <cstdio>

using namespace fgl;

namespace {

experiment::ExperimentConfig load_config(const std::string& path,
                                         const std::string& out_override,
                                         const std::string& data_override)
{
    io::Config raw = path.empty() ? io::Config::parse_text("") : io::Config::parse_file(path);
    experiment::ExperimentConfig cfg = experiment::ExperimentConfig::from_config(raw);
    if (!out_override.empty()) cfg.out_dir = out_override;
    if (!data_override.empty()) cfg.data_dir = data_override;
    return cfg;
}

void print_composition(const experiment::Composition& comp)
{
    std::printf("samples per class: %d human train, %d sterile train, %d validation\n",
                comp.human_train_per_class, comp.sterile_train_per_class, comp.val_per_class);
    std::printf("validation split: %d samples, human captures only\n", comp.val_total());
    std::printf("combined training mix: %.1f%% sterile / %.1f%% human\n",
                100.0 * comp.combined_sterile_fraction(),
                100.0 * (1.0 - comp.combined_sterile_fraction()));
}

void print_metrics_json(const nn::Metrics& m)
{
    std::printf("{\n  \"accuracy\": %.6f,\n  \"loss\": %.6f,\n  \"confusion\": [", m.accuracy,
                m.loss);
    for (int i = 0; i < 3; ++i) {
        std::printf("[%d, %d, %d]%s", m.confusion[i][0], m.confusion[i][1], m.confusion[i][2],
                    i < 2 ? ", " : "");
    }
    std::printf("]\n}\n");
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"simulated radar gesture lab"};
    app.require_subcommand(1);

    std::string config_path, out_dir, data_dir, mode_str = "range", mix_str = "human";
    std::string ckpt_path, dataset_path;
    std::uint64_t seed = 0;
    bool seed_given = false;

    auto add_common = [&](CLI::App* cmd, bool needs_config) {
        auto* opt = cmd->add_option("--config", config_path, "flat key=value config file");
        if (needs_config) opt->check(CLI::ExistingFile);
        cmd->add_option("--out", out_dir, "output directory");
    };

    CLI::App* synth = app.add_subcommand("synth", "simulate and write the dataset files");
    add_common(synth, true);

    CLI::App* train = app.add_subcommand("train", "train one (mode, mix, seed) cell");
    add_common(train, true);
    train->add_option("--mode", mode_str, "range | range-angle");
    train->add_option("--mix", mix_str, "human | combined");
    train->add_option("--seed", seed, "training seed")->each([&](const std::string&) {
        seed_given = true;
    });
    train->add_option("--data", data_dir, "dataset directory (defaults to config data_dir)");

    CLI::App* eval = app.add_subcommand("eval", "evaluate a checkpoint on a dataset");
    eval->add_option("--ckpt", ckpt_path, "checkpoint file")->required()->check(CLI::ExistingFile);
    eval->add_option("--data", dataset_path, "dataset file")->required()->check(CLI::ExistingFile);

    CLI::App* sar_cmd = app.add_subcommand("sar", "back-project the human/sterile SAR comparison");
    add_common(sar_cmd, true);

    CLI::App* report = app.add_subcommand("report", "aggregate trained cells into the report");
    add_common(report, true);
    report->add_option("--data", data_dir, "dataset directory (defaults to config data_dir)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // --help lands here with code 0; everything else is a usage error.
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (synth->parsed()) {
            experiment::ExperimentConfig cfg = load_config(config_path, "", out_dir);
            // synth writes datasets, so --out names the dataset directory.
            experiment::Composition comp = experiment::synth_datasets(cfg);
            print_composition(comp);
            std::printf("wrote datasets to %s\n", cfg.data_dir.c_str());
        } else if (train->parsed()) {
            experiment::ExperimentConfig cfg = load_config(config_path, out_dir, data_dir);
            const Mode mode = mode_from_string(mode_str);
            const experiment::Mix mix = experiment::mix_from_string(mix_str);
            const std::uint64_t s = seed_given ? seed : cfg.seeds.front();
            nn::TrainResult r = experiment::train_cell(cfg, mode, mix, s);
            std::printf("cell %s/%s seed %llu: best val accuracy %.4f at epoch %d\n",
                        to_string(mode), to_string(mix), static_cast<unsigned long long>(s),
                        r.best_val_accuracy, r.best_epoch);
        } else if (eval->parsed()) {
            nn::Cnn model = io::read_checkpoint(ckpt_path);
            auto data = io::read_dataset(dataset_path);
            print_metrics_json(nn::evaluate(model, data));
        } else if (sar_cmd->parsed()) {
            experiment::ExperimentConfig cfg = load_config(config_path, out_dir, "");
            experiment::SarComparison cmp = experiment::write_sar_comparison(cfg);
            std::printf("human:   snr %8.2f -> %s\n", cmp.human_snr, cmp.human_path.c_str());
            std::printf("sterile: snr %8.2f -> %s\n", cmp.sterile_snr, cmp.sterile_path.c_str());
            std::printf("sterile/human snr ratio: %.2f\n",
                        cmp.human_snr > 0.0 ? cmp.sterile_snr / cmp.human_snr : 0.0);
        } else if (report->parsed()) {
            experiment::ExperimentConfig cfg = load_config(config_path, out_dir, data_dir);
            experiment::Report rep = experiment::make_report(cfg);
            std::fputs(rep.text.c_str(), stdout);
            std::printf("wrote report to %s\n", cfg.out_dir.c_str());
        }
    } catch (const NumericError& e) {
        std::fprintf(stderr, "numeric error: %s\n", e.what());
        return 3;
    } catch (const DataFormatError& e) {
        std::fprintf(stderr, "data error: %s\n", e.what());
        return 2;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "invalid input: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
