#ifndef FKP_EVAL_HPP
#define FKP_EVAL_HPP

#include <filesystem>
#include <iosfwd>
#include <map>
#include <vector>

#include "fkp/gallery.hpp"

namespace fkp {

// Leave-one-out experiment configuration. Dataset layout on disk:
// <dataset_root>/<finger-label>/<subject-id>/<session>.pgm
struct EvalConfig {
    std::filesystem::path dataset_root;
    std::vector<FingerLabel> fingers{kAllFingers.begin(), kAllFingers.end()};
    Measure measure = Measure::kChamfer;
    PipelineParams pipeline;
    RoiSpec roi;
    bool roi_first = false;
    ChamferParams chamfer;
    int workers = 0;  // 0 = hardware concurrency
};

// Raw confusion counts for one finger experiment. Every probe produces one
// trial and (gallery size - 1) pairwise comparisons, of which exactly one
// (the best match) is decided positive:
//   tp  trials whose best match shares the probe's subject
//   fp  trials whose best match does not
//   fn  genuine comparisons (mates) that were not chosen
//   tn  impostor comparisons that were not chosen
struct ConfusionCounts {
    long long trials = 0;
    long long correct = 0;
    long long comparisons = 0;
    long long genuine_comparisons = 0;
    long long impostor_comparisons = 0;
    long long tp = 0;
    long long fp = 0;
    long long fn = 0;
    long long tn = 0;
};

// Percentage rates derived from the counts. TP and FP are trial-level
// (tp_rate + fp_rate = 100); TN is over impostor comparisons and FN over all
// comparisons; accuracy is (tp + tn) over all comparisons. The raw counts are
// kept alongside so any other convention can be recomputed.
struct FingerReport {
    ConfusionCounts counts;
    double tp_rate = 0;
    double tn_rate = 0;
    double fp_rate = 0;
    double fn_rate = 0;
    double accuracy = 0;
};

struct EvalReport {
    Measure measure = Measure::kChamfer;
    double tau = 2.0;
    std::map<FingerLabel, FingerReport> per_finger;
    // Unweighted means of the per-finger rates.
    double tp_rate = 0;
    double tn_rate = 0;
    double fp_rate = 0;
    double fn_rate = 0;
    double accuracy = 0;
    double wall_time_sec = 0;
    double time_ratio_vs_ma = 1.0;  // sampled per-comparison cost vs mean-absolute
};

FingerReport make_finger_report(const ConfusionCounts& counts);

// Builds one gallery per configured finger and runs every enrolled image as a
// probe against the rest of its gallery. Probes run in parallel over
// config.workers threads; results are independent of the worker count.
EvalReport run_loo(const EvalConfig& config);

struct MeasureTiming {
    double mean_us = 0;
    double ratio_vs_ma = 0;
};

struct TimingReport {
    std::map<Measure, MeasureTiming> by_measure;
    int sampled_pairs = 0;
};

// Mean wall-clock cost of a single template-pair comparison for each measure,
// normalized so mean-absolute is 1. Single-threaded for stable numbers.
TimingReport run_timing(const EvalConfig& config, int sample_pairs = 128);

struct RandomBaseline {
    double paper_pct;  // 100 * sessions / (subjects*sessions - 1), capped at 100
    double mate_pct;   // 100 * (sessions-1) / (subjects*sessions - 1), probe excluded
};

RandomBaseline random_baseline(int subjects, int sessions);

// One dataset file discovered by scan_dataset, sorted by key.
struct DatasetImage {
    EntryKey key;
    std::filesystem::path file;
};

std::vector<DatasetImage> scan_dataset(const std::filesystem::path& root,
                                       const std::vector<FingerLabel>& fingers);

void print_report(const EvalReport& report, std::ostream& out);
void write_report_csv(const EvalReport& report, const std::filesystem::path& path);

}  // namespace fkp

#endif
