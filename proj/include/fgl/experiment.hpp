#pragma once

#include "fgl/io.hpp"
#include "fgl/nn.hpp"
#include "fgl/scene.hpp"
#include "fgl/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace fgl::experiment {

enum class Mix : std::uint8_t {
    HumanOnly = 0, // train on human captures only
    Combined = 1,  // human captures plus all sterile captures
};

const char* to_string(Mix m);
Mix mix_from_string(const std::string& s);

// Everything one experiment needs, assembled from a flat config file (see
// the README for the key list). data_dir holds the dataset files written
// by synth; out_dir receives checkpoints, metric logs and reports.
struct ExperimentConfig {
    scene::DatasetSpec dataset;
    double val_fraction = 0.1;
    int crop_start = 6;
    int crop_bins = 64;
    int n_angle = 16;
    nn::TrainConfig train;
    std::vector<std::uint64_t> seeds = {1, 2, 3};
    std::string data_dir = "data";
    std::string out_dir = "runs";
    // SAR figure knobs.
    int sar_per_axis = 64;
    int sar_pixels = 64;
    double sar_extent = 0.4; // m, image square side
    double sar_z = 0.4;      // m, hand depth used for the SAR figures
    int sar_n_k = 64;        // wavenumber samples for the figures; 0 = radar n_k

    static ExperimentConfig from_config(const io::Config& cfg);
    void validate() const;
};

// File naming inside data_dir / out_dir.
std::string dataset_filename(const std::string& split, Mode mode);      // e.g. "train_human.range.fgl"
std::string checkpoint_filename(Mode mode, Mix mix, std::uint64_t seed);
std::string metrics_filename(Mode mode, Mix mix, std::uint64_t seed);

// Counts describing how the synthesized samples were divided.
struct Composition {
    int human_train_per_class = 0;
    int sterile_train_per_class = 0;
    int val_per_class = 0;

    int train_human_total() const { return kNumClasses * human_train_per_class; }
    int train_sterile_total() const { return kNumClasses * sterile_train_per_class; }
    int val_total() const { return kNumClasses * val_per_class; }
    double combined_sterile_fraction() const
    {
        return static_cast<double>(train_sterile_total()) /
               static_cast<double>(train_human_total() + train_sterile_total());
    }
};

// Simulates the full dataset and writes, per mode, train_human /
// train_sterile / val files plus a checksum manifest. The validation
// samples are a per-class random draw from the human captures, identical
// across modes, and never contain sterile data.
Composition synth_datasets(const ExperimentConfig& cfg);

// Loads the training set for a cell (verifying the manifest checksums)
// and the frozen validation set.
struct CellData {
    std::vector<dsp::ProcessedSample> train;
    std::vector<dsp::ProcessedSample> val;
};
CellData load_cell(const ExperimentConfig& cfg, Mode mode, Mix mix);

// Trains one (mode, mix, seed) cell, writes its checkpoint and per-epoch
// CSV, and returns the result.
nn::TrainResult train_cell(const ExperimentConfig& cfg, Mode mode, Mix mix, std::uint64_t seed);

struct CellResult {
    Mode mode = Mode::Range;
    Mix mix = Mix::HumanOnly;
    std::uint64_t seed = 0;
    double accuracy = 0.0;
    int best_epoch = 0;
};

struct Report {
    std::vector<CellResult> cells;
    Composition composition;
    // Means and half of the min-to-max spread across seeds, indexed
    // [mode][mix].
    double mean[2][2] = {{0.0, 0.0}, {0.0, 0.0}};
    double spread[2][2] = {{0.0, 0.0}, {0.0, 0.0}};
    std::string text;
};

// Renders the human/sterile palm comparison through the SAR pipeline and
// writes sar_human.pgm / sar_sterile.pgm into out_dir. The SNR mask is a
// box around the hand.
struct SarComparison {
    double human_snr = 0.0;
    double sterile_snr = 0.0;
    std::string human_path;
    std::string sterile_path;
};
SarComparison write_sar_comparison(const ExperimentConfig& cfg);

// Evaluates every (mode, mix, seed) checkpoint on the frozen validation
// set, renders the summary table, and writes report.txt / report.csv plus
// the supporting figures (per-class profile magnitudes, SAR images).
Report make_report(const ExperimentConfig& cfg);

// synth + all cells + report in one call.
Report run_all(const ExperimentConfig& cfg);

} // namespace fgl::experiment
