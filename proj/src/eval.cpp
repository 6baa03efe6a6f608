#include "fkp/eval.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <ostream>
#include <random>
#include <thread>

#include "fkp/pnm.hpp"

namespace fkp {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

int effective_workers(int requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

// Runs fn(i) for i in [0, n) across the given number of threads.
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn) {
    if (workers <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    const int count = std::min<std::size_t>(workers, n);
    pool.reserve(count);
    for (int t = 0; t < count; ++t)
        pool.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
        });
    for (auto& th : pool) th.join();
}

std::vector<std::pair<std::size_t, std::size_t>> sample_pairs(std::size_t n, int how_many,
                                                              std::uint32_t seed) {
    std::mt19937 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    pairs.reserve(how_many);
    while (static_cast<int>(pairs.size()) < how_many) {
        const std::size_t a = pick(rng), b = pick(rng);
        if (a != b) pairs.emplace_back(a, b);
    }
    return pairs;
}

// Mean wall-clock microseconds of one pair_score call, repeated until the
// total elapsed time is long enough to trust.
double mean_comparison_us(const Gallery& g,
                          const std::vector<std::pair<std::size_t, std::size_t>>& pairs,
                          Measure m, const ChamferParams& cp) {
    volatile double sink = 0;
    long long calls = 0;
    double elapsed = 0;
    do {
        const auto t0 = Clock::now();
        for (const auto& [a, b] : pairs)
            sink = sink + pair_score(g.entries()[a].tpl, g.entries()[b].tpl, m, cp);
        elapsed += seconds_since(t0);
        calls += static_cast<long long>(pairs.size());
    } while (elapsed < 0.05);
    (void)sink;
    return elapsed * 1e6 / static_cast<double>(calls);
}

struct FingerDataset {
    std::vector<DatasetImage> images;
    std::map<std::string, int> sessions_per_subject;
};

FingerDataset collect_finger(const std::vector<DatasetImage>& all, FingerLabel finger) {
    FingerDataset out;
    for (const auto& img : all)
        if (img.key.finger == finger) {
            out.images.push_back(img);
            out.sessions_per_subject[img.key.subject]++;
        }
    return out;
}

void validate_loo_shape(const FingerDataset& ds, FingerLabel finger) {
    if (ds.images.empty())
        throw FormatError("dataset: no images for finger '" + std::string(finger_name(finger)) + "'");
    if (ds.sessions_per_subject.size() < 2)
        throw FormatError("dataset: finger '" + std::string(finger_name(finger)) +
                          "' needs at least 2 subjects");
    for (const auto& [subject, count] : ds.sessions_per_subject)
        if (count < 2)
            throw FormatError("dataset: subject '" + subject + "' has fewer than 2 sessions for '" +
                              std::string(finger_name(finger)) + "'; leave-one-out is degenerate");
}

}  // namespace

FingerReport make_finger_report(const ConfusionCounts& c) {
    FingerReport r;
    r.counts = c;
    const double trials = static_cast<double>(c.trials);
    r.tp_rate = 100.0 * static_cast<double>(c.tp) / trials;
    r.fp_rate = 100.0 * static_cast<double>(c.fp) / trials;
    r.tn_rate = c.impostor_comparisons > 0
                    ? 100.0 * static_cast<double>(c.tn) / static_cast<double>(c.impostor_comparisons)
                    : 100.0;
    r.fn_rate = 100.0 * static_cast<double>(c.fn) / static_cast<double>(c.comparisons);
    r.accuracy = 100.0 * static_cast<double>(c.tp + c.tn) / static_cast<double>(c.comparisons);
    return r;
}

std::vector<DatasetImage> scan_dataset(const std::filesystem::path& root,
                                       const std::vector<FingerLabel>& fingers) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(root)) throw IoError("dataset root not found: '" + root.string() + "'");
    std::vector<DatasetImage> images;
    for (const FingerLabel finger : fingers) {
        const fs::path finger_dir = root / std::string(finger_name(finger));
        if (!fs::is_directory(finger_dir))
            throw IoError("dataset: missing finger directory '" + finger_dir.string() + "'");
        for (const auto& subject_entry : fs::directory_iterator(finger_dir)) {
            if (!subject_entry.is_directory()) continue;
            const std::string subject = subject_entry.path().filename().string();
            for (const auto& file_entry : fs::directory_iterator(subject_entry.path())) {
                if (!file_entry.is_regular_file() || file_entry.path().extension() != ".pgm")
                    continue;
                const std::string stem = file_entry.path().stem().string();
                int session = 0;
                try {
                    std::size_t pos = 0;
                    session = std::stoi(stem, &pos);
                    if (pos != stem.size()) throw std::invalid_argument(stem);
                } catch (const std::exception&) {
                    throw FormatError("dataset: session file name '" +
                                      file_entry.path().string() + "' is not an integer");
                }
                images.push_back(DatasetImage{EntryKey{subject, finger, session}, file_entry.path()});
            }
        }
    }
    // Directory enumeration order is filesystem-dependent; results must not be.
    std::sort(images.begin(), images.end(),
              [](const DatasetImage& a, const DatasetImage& b) { return a.key < b.key; });
    return images;
}

EvalReport run_loo(const EvalConfig& config) {
    if (config.fingers.empty()) throw InvalidArgument("run_loo: no fingers configured");
    const auto t0 = Clock::now();
    const std::vector<DatasetImage> all = scan_dataset(config.dataset_root, config.fingers);

    EvalReport report;
    report.measure = config.measure;
    report.tau = config.chamfer.tau;
    const int workers = effective_workers(config.workers);
    bool ratio_sampled = false;

    for (const FingerLabel finger : config.fingers) {
        const FingerDataset ds = collect_finger(all, finger);
        validate_loo_shape(ds, finger);

        Gallery gallery(GalleryParams{config.pipeline, config.roi, config.roi_first});
        for (const auto& img : ds.images) gallery.enroll(read_gray(img.file), img.key);

        const bool needs_fields = config.measure != Measure::kMeanAbsolute;
        const std::vector<TemplateDistanceFields> cache =
            needs_fields ? gallery.build_distance_fields() : std::vector<TemplateDistanceFields>{};
        const auto* cache_ptr = needs_fields ? &cache : nullptr;

        const std::size_t n = gallery.size();
        std::vector<std::uint8_t> correct(n, 0);
        parallel_for(n, workers, [&](std::size_t i) {
            const GalleryEntry& probe = gallery.entries()[i];
            const MatchResult r =
                gallery.identify(probe.tpl, config.measure, config.chamfer, probe.key, cache_ptr);
            const GalleryEntry& best = gallery.entries()[r.best_index()];
            correct[i] = best.key.subject == probe.key.subject;
        });

        ConfusionCounts counts;
        counts.trials = static_cast<long long>(n);
        for (std::size_t i = 0; i < n; ++i) {
            const long long mates =
                ds.sessions_per_subject.at(gallery.entries()[i].key.subject) - 1;
            const long long impostors = static_cast<long long>(n) - 1 - mates;
            const bool ok = correct[i] != 0;
            counts.correct += ok;
            counts.comparisons += static_cast<long long>(n) - 1;
            counts.genuine_comparisons += mates;
            counts.impostor_comparisons += impostors;
            counts.tp += ok;
            counts.fp += !ok;
            counts.fn += mates - (ok ? 1 : 0);
            counts.tn += impostors - (ok ? 0 : 1);
        }
        report.per_finger[finger] = make_finger_report(counts);

        if (!ratio_sampled) {
            ratio_sampled = true;
            if (config.measure == Measure::kMeanAbsolute) {
                report.time_ratio_vs_ma = 1.0;
            } else {
                const auto pairs = sample_pairs(n, std::min<std::size_t>(16, n * (n - 1)), 0x5eedu);
                const double ma_us =
                    mean_comparison_us(gallery, pairs, Measure::kMeanAbsolute, config.chamfer);
                const double m_us =
                    mean_comparison_us(gallery, pairs, config.measure, config.chamfer);
                report.time_ratio_vs_ma = m_us / ma_us;
            }
        }
    }

    const double k = static_cast<double>(report.per_finger.size());
    for (const auto& [finger, fr] : report.per_finger) {
        report.tp_rate += fr.tp_rate / k;
        report.tn_rate += fr.tn_rate / k;
        report.fp_rate += fr.fp_rate / k;
        report.fn_rate += fr.fn_rate / k;
        report.accuracy += fr.accuracy / k;
    }
    report.wall_time_sec = seconds_since(t0);
    return report;
}

TimingReport run_timing(const EvalConfig& config, int sample_pairs_count) {
    if (config.fingers.empty()) throw InvalidArgument("run_timing: no fingers configured");
    if (sample_pairs_count < 1) throw InvalidArgument("run_timing: need at least one sampled pair");
    const std::vector<DatasetImage> all = scan_dataset(config.dataset_root, config.fingers);
    const FingerDataset ds = collect_finger(all, config.fingers.front());
    validate_loo_shape(ds, config.fingers.front());

    Gallery gallery(GalleryParams{config.pipeline, config.roi, config.roi_first});
    for (const auto& img : ds.images) gallery.enroll(read_gray(img.file), img.key);

    const auto pairs = sample_pairs(
        gallery.size(),
        static_cast<int>(std::min<long long>(sample_pairs_count,
                                             static_cast<long long>(gallery.size()) *
                                                 (static_cast<long long>(gallery.size()) - 1))),
        0xf1a9u);

    TimingReport report;
    report.sampled_pairs = static_cast<int>(pairs.size());
    const double ma_us = mean_comparison_us(gallery, pairs, Measure::kMeanAbsolute, config.chamfer);
    for (const Measure m : {Measure::kMeanAbsolute, Measure::kHausdorff, Measure::kChamfer}) {
        const double us = m == Measure::kMeanAbsolute
                              ? ma_us
                              : mean_comparison_us(gallery, pairs, m, config.chamfer);
        report.by_measure[m] = MeasureTiming{us, us / ma_us};
    }
    return report;
}

RandomBaseline random_baseline(int subjects, int sessions) {
    if (subjects < 1) throw InvalidArgument("random_baseline: subjects must be >= 1");
    if (sessions < 2) throw InvalidArgument("random_baseline: sessions must be >= 2");
    const double denom = static_cast<double>(subjects) * sessions - 1.0;
    return RandomBaseline{
        std::min(100.0, 100.0 * sessions / denom),
        std::min(100.0, 100.0 * (sessions - 1) / denom),
    };
}

void print_report(const EvalReport& report, std::ostream& out) {
    out << std::fixed << std::setprecision(4);
    out << "leave-one-out identification  measure=" << measure_name(report.measure)
        << "  tau=" << report.tau << "\n";
    out << std::left << std::setw(14) << "finger" << std::right << std::setw(8) << "trials"
        << std::setw(12) << "tp (%)" << std::setw(12) << "fn (%)" << std::setw(13)
        << "accuracy (%)" << "\n";
    for (const auto& [finger, fr] : report.per_finger)
        out << std::left << std::setw(14) << finger_name(finger) << std::right << std::setw(8)
            << fr.counts.trials << std::setw(12) << fr.tp_rate << std::setw(12) << fr.fn_rate
            << std::setw(13) << fr.accuracy << "\n";
    out << "aggregate  tp=" << report.tp_rate << "  tn=" << report.tn_rate
        << "  fp=" << report.fp_rate << "  fn=" << report.fn_rate
        << "  accuracy=" << report.accuracy << "\n";
    out << "wall_time=" << report.wall_time_sec << "s  time_vs_ma=" << report.time_ratio_vs_ma
        << "x\n";
}

void write_report_csv(const EvalReport& report, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("cannot write report to '" + path.string() + "'");
    out << std::fixed << std::setprecision(4);
    out << "section,finger,measure,tau,trials,comparisons,genuine_comparisons,"
           "impostor_comparisons,tp,fp,fn,tn,tp_rate,tn_rate,fp_rate,fn_rate,accuracy,"
           "wall_time_sec,time_ratio_vs_ma\n";
    ConfusionCounts total;
    for (const auto& [finger, fr] : report.per_finger) {
        const ConfusionCounts& c = fr.counts;
        out << "finger," << finger_name(finger) << "," << measure_name(report.measure) << ","
            << report.tau << "," << c.trials << "," << c.comparisons << ","
            << c.genuine_comparisons << "," << c.impostor_comparisons << "," << c.tp << "," << c.fp
            << "," << c.fn << "," << c.tn << "," << fr.tp_rate << "," << fr.tn_rate << ","
            << fr.fp_rate << "," << fr.fn_rate << "," << fr.accuracy << ",,\n";
        total.trials += c.trials;
        total.comparisons += c.comparisons;
        total.genuine_comparisons += c.genuine_comparisons;
        total.impostor_comparisons += c.impostor_comparisons;
        total.tp += c.tp;
        total.fp += c.fp;
        total.fn += c.fn;
        total.tn += c.tn;
    }
    out << "aggregate,all," << measure_name(report.measure) << "," << report.tau << ","
        << total.trials << "," << total.comparisons << "," << total.genuine_comparisons << ","
        << total.impostor_comparisons << "," << total.tp << "," << total.fp << "," << total.fn
        << "," << total.tn << "," << report.tp_rate << "," << report.tn_rate << ","
        << report.fp_rate << "," << report.fn_rate << "," << report.accuracy << ","
        << report.wall_time_sec << "," << report.time_ratio_vs_ma << "\n";
    if (!out) throw IoError("report write failed for '" + path.string() + "'");
}

}  // namespace fkp
