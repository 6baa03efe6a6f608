// fkp — finger-knuckle-print matching from the command line.
//
// Subcommands: preprocess, enroll, identify, evaluate, bench. Run with --help
// for the flag reference. Defaults reproduce the standard pipeline
// configuration (shadow d=4 t=8, light d=4 t=5, noise windows 10/13 and 5/7,
// 220x110 centered ROI, chamfer with tau=2).

#include <CLI11.hpp>

#include <cstdio>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "fkp/eval.hpp"
#include "fkp/gallery.hpp"
#include "fkp/pnm.hpp"

namespace {

struct PipelineFlags {
    fkp::PipelineParams pipeline;
    fkp::RoiSpec roi;
    bool roi_first = false;
    // set only when the user passed the flag
    std::optional<int> roi_x, roi_y;

    void attach(CLI::App* cmd) {
        cmd->add_option("--shadow-d", pipeline.shadow_sobel.d, "Shadow detector pixel offset")
            ->capture_default_str();
        cmd->add_option("--shadow-t", pipeline.shadow_sobel.t, "Shadow detector threshold")
            ->capture_default_str();
        cmd->add_option("--light-d", pipeline.light_sobel.d, "Light detector pixel offset")
            ->capture_default_str();
        cmd->add_option("--light-t", pipeline.light_sobel.t, "Light detector threshold")
            ->capture_default_str();
        cmd->add_option("--shadow-nr-t", pipeline.shadow_noise.t,
                        "Shadow noise-reduction neighbor threshold")
            ->capture_default_str();
        cmd->add_option_function<int>(
               "--shadow-nr-a",
               [this](int a) {
                   pipeline.shadow_noise.ax = a;
                   pipeline.shadow_noise.ay = a;
               },
               "Shadow noise-reduction half-window (both axes)")
            ->default_str("10");
        cmd->add_option("--light-nr-t", pipeline.light_noise.t,
                        "Light noise-reduction neighbor threshold")
            ->capture_default_str();
        cmd->add_option_function<int>(
               "--light-nr-a",
               [this](int a) {
                   pipeline.light_noise.ax = a;
                   pipeline.light_noise.ay = a;
               },
               "Light noise-reduction half-window (both axes)")
            ->default_str("5");
        cmd->add_option("--roi-w", roi.width, "ROI width")->capture_default_str();
        cmd->add_option("--roi-h", roi.height, "ROI height")->capture_default_str();
        cmd->add_option("--roi-x", roi_x, "ROI left offset (default: centered)");
        cmd->add_option("--roi-y", roi_y, "ROI top offset (default: centered)");
        cmd->add_flag("--roi-first", roi_first, "Crop the ROI before preprocessing");
    }

    fkp::GalleryParams gallery_params() {
        roi.offset_x = roi_x;
        roi.offset_y = roi_y;
        return fkp::GalleryParams{pipeline, roi, roi_first};
    }
};

fkp::Measure measure_from(const std::string& name) {
    const auto m = fkp::parse_measure(name);
    if (!m) throw fkp::InvalidArgument("unknown measure '" + name + "' (use ma, hd or cd)");
    return *m;
}

fkp::FingerLabel finger_from(const std::string& name) {
    const auto f = fkp::parse_finger(name);
    if (!f)
        throw fkp::InvalidArgument("unknown finger '" + name +
                                   "' (use left-index, left-middle, right-index, right-middle)");
    return *f;
}

std::vector<fkp::FingerLabel> fingers_from(const std::vector<std::string>& names) {
    if (names.empty()) return {fkp::kAllFingers.begin(), fkp::kAllFingers.end()};
    std::vector<fkp::FingerLabel> out;
    for (const auto& n : names) out.push_back(finger_from(n));
    return out;
}

void print_ranking(const fkp::Gallery& gallery, const fkp::MatchResult& result, int top) {
    std::cout << std::fixed << std::setprecision(4);
    const auto& best = gallery.entries()[result.best_index()];
    std::cout << "best: subject=" << best.key.subject << " finger=" << finger_name(best.key.finger)
              << " session=" << best.key.session << " score=" << result.best_score() << "\n";
    const int shown = std::min<int>(top, static_cast<int>(result.ranked.size()));
    for (int r = 0; r < shown; ++r) {
        const auto& [idx, score] = result.ranked[r];
        const auto& e = gallery.entries()[idx];
        std::cout << "rank " << (r + 1) << ": subject=" << e.key.subject
                  << " finger=" << finger_name(e.key.finger) << " session=" << e.key.session
                  << " score=" << score << "\n";
    }
}

void print_warnings(const std::vector<std::string>& warnings) {
    for (const auto& w : warnings) std::cerr << "fkp: warning: " << w << "\n";
}

int run(int argc, char** argv) {
    CLI::App app{"Finger-knuckle-print recognition: binary edge templates plus "
                 "MA/Hausdorff/chamfer matching"};
    app.require_subcommand(1);

    // --- preprocess -------------------------------------------------------
    auto* pre = app.add_subcommand("preprocess", "Build the shadow/light ROI templates of one image");
    std::string pre_input, pre_prefix;
    PipelineFlags pre_flags;
    pre->add_option("input", pre_input, "Input P5 graymap")->required();
    pre->add_option("out-prefix", pre_prefix, "Output path prefix")->required();
    pre_flags.attach(pre);
    pre->callback([&] {
        const auto params = pre_flags.gallery_params();
        const fkp::GrayImage img = fkp::read_gray(pre_input);
        const fkp::TemplatePair tpl =
            fkp::make_template(img, params.pipeline, params.roi, params.roi_first);
        fkp::write_binary(tpl.shadow, pre_prefix + "_shadow.pbm");
        fkp::write_binary(tpl.light, pre_prefix + "_light.pbm");
        std::cout << pre_prefix + "_shadow.pbm\n" << pre_prefix + "_light.pbm\n";
    });

    // --- enroll -----------------------------------------------------------
    auto* enr = app.add_subcommand("enroll", "Add one image to a gallery directory");
    std::string enr_dir, enr_input, enr_subject, enr_finger;
    int enr_session = 1;
    PipelineFlags enr_flags;
    enr->add_option("gallery", enr_dir, "Gallery directory (created if missing)")->required();
    enr->add_option("input", enr_input, "Input P5 graymap")->required();
    enr->add_option("--subject", enr_subject, "Subject id")->required();
    enr->add_option("--finger", enr_finger, "Finger label")->required();
    enr->add_option("--session", enr_session, "Session number")->required();
    enr_flags.attach(enr);
    enr->callback([&] {
        fkp::Gallery gallery;
        std::vector<std::string> warnings;
        if (std::filesystem::exists(std::filesystem::path(enr_dir) / "manifest.csv")) {
            gallery = fkp::Gallery::load(enr_dir, &warnings);
            print_warnings(warnings);
        } else {
            gallery = fkp::Gallery(enr_flags.gallery_params());
        }
        gallery.enroll(fkp::read_gray(enr_input),
                       fkp::EntryKey{enr_subject, finger_from(enr_finger), enr_session});
        gallery.save(enr_dir);
        std::cout << "enrolled " << enr_subject << "/" << enr_finger << "/" << enr_session
                  << " (" << gallery.size() << " entries)\n";
    });

    // --- identify ---------------------------------------------------------
    auto* ident = app.add_subcommand("identify", "Rank gallery entries against a probe image");
    std::string id_dir, id_probe, id_measure = "cd";
    double id_tau = 2.0;
    int id_top = 5;
    std::optional<double> id_threshold;
    ident->add_option("gallery", id_dir, "Gallery directory")->required();
    ident->add_option("probe", id_probe, "Probe P5 graymap")->required();
    ident->add_option("--measure", id_measure, "Similarity measure: ma, hd or cd")
        ->capture_default_str();
    ident->add_option("--tau", id_tau, "Chamfer distance cap")->capture_default_str();
    ident->add_option("--top", id_top, "Ranked entries to print")->capture_default_str();
    ident->add_option("--threshold", id_threshold,
                      "Open-set mode: report no-match when the best score exceeds this");
    ident->callback([&] {
        std::vector<std::string> warnings;
        const fkp::Gallery gallery = fkp::Gallery::load(id_dir, &warnings);
        print_warnings(warnings);
        const auto& gp = gallery.params();
        const fkp::TemplatePair probe =
            fkp::make_template(fkp::read_gray(id_probe), gp.pipeline, gp.roi, gp.roi_first);
        const fkp::MatchResult result =
            gallery.identify(probe, measure_from(id_measure), fkp::ChamferParams{id_tau});
        if (id_threshold && result.best_score() > *id_threshold) {
            std::cout << std::fixed << std::setprecision(4) << "no-match: best score "
                      << result.best_score() << " exceeds threshold " << *id_threshold << "\n";
            return;
        }
        print_ranking(gallery, result, id_top);
    });

    // --- evaluate ---------------------------------------------------------
    auto* ev = app.add_subcommand("evaluate", "Leave-one-out identification over a dataset tree");
    std::string ev_root, ev_measure = "cd", ev_report_out;
    std::vector<std::string> ev_fingers;
    double ev_tau = 2.0;
    int ev_workers = 0;
    PipelineFlags ev_flags;
    ev->add_option("dataset", ev_root, "Dataset root: <root>/<finger>/<subject>/<session>.pgm")
        ->required();
    ev->add_option("--fingers", ev_fingers, "Finger labels to evaluate (default: all four)")
        ->delimiter(',');
    ev->add_option("--measure", ev_measure, "Similarity measure: ma, hd or cd")
        ->capture_default_str();
    ev->add_option("--tau", ev_tau, "Chamfer distance cap")->capture_default_str();
    ev->add_option("--workers", ev_workers, "Worker threads (0 = all cores)")
        ->capture_default_str();
    ev->add_option("--report-out", ev_report_out, "Also write the report as CSV");
    ev_flags.attach(ev);
    ev->callback([&] {
        fkp::EvalConfig config;
        config.dataset_root = ev_root;
        config.fingers = fingers_from(ev_fingers);
        config.measure = measure_from(ev_measure);
        const auto params = ev_flags.gallery_params();
        config.pipeline = params.pipeline;
        config.roi = params.roi;
        config.roi_first = params.roi_first;
        config.chamfer.tau = ev_tau;
        config.workers = ev_workers;
        const fkp::EvalReport report = fkp::run_loo(config);
        fkp::print_report(report, std::cout);
        if (!ev_report_out.empty()) fkp::write_report_csv(report, ev_report_out);
    });

    // --- bench ------------------------------------------------------------
    auto* bench = app.add_subcommand("bench", "Per-comparison cost of each measure on a dataset");
    std::string bench_root;
    std::vector<std::string> bench_fingers;
    double bench_tau = 2.0;
    int bench_samples = 128;
    PipelineFlags bench_flags;
    bench->add_option("dataset", bench_root, "Dataset root")->required();
    bench->add_option("--fingers", bench_fingers, "Finger labels (first one is sampled)")
        ->delimiter(',');
    bench->add_option("--tau", bench_tau, "Chamfer distance cap")->capture_default_str();
    bench->add_option("--samples", bench_samples, "Template pairs to sample")
        ->capture_default_str();
    bench_flags.attach(bench);
    bench->callback([&] {
        fkp::EvalConfig config;
        config.dataset_root = bench_root;
        config.fingers = fingers_from(bench_fingers);
        const auto params = bench_flags.gallery_params();
        config.pipeline = params.pipeline;
        config.roi = params.roi;
        config.roi_first = params.roi_first;
        config.chamfer.tau = bench_tau;
        const fkp::TimingReport report = fkp::run_timing(config, bench_samples);
        std::cout << std::fixed << std::setprecision(4);
        std::cout << "sampled pairs: " << report.sampled_pairs << "\n";
        for (const auto& [m, t] : report.by_measure)
            std::cout << measure_name(m) << "  mean_us=" << t.mean_us
                      << "  ratio_vs_ma=" << t.ratio_vs_ma << "\n";
    });

    CLI11_PARSE(app, argc, argv);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const std::exception& e) {
        std::cerr << "fkp: " << e.what() << "\n";
        return 1;
    }
}
