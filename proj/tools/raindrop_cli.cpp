// Copyright 2026 The raindrop authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end. Subcommands:
//   detect    classify one sequence, write mask + diagnostic gradient map
//   segment   write the segmentation mask only
//   synth     render synthetic raindrops onto images (image/mask/spec triples)
//   ingest    validate a dataset tree, rasterize + propagate keyframe labels
//   eval-roc  threshold sweep over sequence manifests, ROC CSV + AUC summary
//   eval-seg  score predicted masks against ground truth
//   bench     time the gradient pipeline against the NCC baseline
//
// Exit codes: 0 success, 2 usage or parameter error, 3 malformed data,
// 4 I/O failure, 5 unexpected internal error.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "raindrop/raindrop.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitIo = 4;
constexpr int kExitInternal = 5;

std::string fmt6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

struct Options {
    std::string input;
    std::string output = ".";
    std::string gt;

    int sobel = 5;
    int gauss_d = 271;
    double tb = 0.18;
    int dilate_m = 91;
    double td = 0.1;

    int ncc_window = 11;
    double ncc_tc = 0.8;
    bool with_ncc = false;

    int drops_min = 1;
    int drops_max = 3;
    int r_min = 10;
    int r_max = 30;
    int brightness_min = 160;
    int brightness_max = 255;

    std::uint64_t seed = 0;
    int threads = 1;
    int repeats = 5;
    std::string dice_style = "doubled";
    std::string resize;  // "WxH" or empty
};

raindrop::DetectorParams detector_params(const Options& opt) {
    raindrop::DetectorParams params;
    params.sobel_aperture = raindrop::KernelSize(opt.sobel);
    params.gaussian_size = raindrop::KernelSize(opt.gauss_d);
    params.binarize_threshold = opt.tb;
    params.dilate_size = raindrop::KernelSize(opt.dilate_m);
    params.detect_threshold = opt.td;
    raindrop::validate_params(params);
    return params;
}

raindrop::NccParams ncc_params(const Options& opt) {
    raindrop::NccParams params;
    params.window = raindrop::KernelSize(opt.ncc_window);
    params.corr_threshold = opt.ncc_tc;
    params.detect_threshold = opt.td;
    raindrop::validate_params(params);
    return params;
}

raindrop::SynthConfig synth_config(const Options& opt) {
    raindrop::SynthConfig config;
    config.drops_min = opt.drops_min;
    config.drops_max = opt.drops_max;
    config.r_min = opt.r_min;
    config.r_max = opt.r_max;
    config.brightness_min = opt.brightness_min;
    config.brightness_max = opt.brightness_max;
    config.seed = opt.seed;
    raindrop::validate_config(config);
    return config;
}

std::optional<std::pair<int, int>> parse_resize(const Options& opt) {
    if (opt.resize.empty()) return std::nullopt;
    int w = 0, h = 0;
    if (std::sscanf(opt.resize.c_str(), "%dx%d", &w, &h) != 2 || w <= 0 || h <= 0) {
        throw raindrop::ParameterError("--resize expects WxH with positive integers, got '" +
                                       opt.resize + "'");
    }
    return std::make_pair(w, h);
}

raindrop::FrameSequence maybe_resize(raindrop::FrameSequence seq, const Options& opt) {
    const auto target = parse_resize(opt);
    if (!target) return seq;
    for (auto& frame : seq.frames) {
        frame = raindrop::resize_nearest(frame, target->first, target->second);
    }
    return seq;
}

void write_run_json(const Options& opt, const std::string& command) {
    json run;
    run["command"] = command;
    run["input"] = opt.input;
    run["output"] = opt.output;
    if (!opt.gt.empty()) run["gt"] = opt.gt;
    run["params"] = {
        {"sobel", opt.sobel},       {"gauss_d", opt.gauss_d},
        {"tb", opt.tb},             {"dilate_m", opt.dilate_m},
        {"td", opt.td},             {"ncc_window", opt.ncc_window},
        {"ncc_tc", opt.ncc_tc},     {"drops_min", opt.drops_min},
        {"drops_max", opt.drops_max}, {"r_min", opt.r_min},
        {"r_max", opt.r_max},       {"brightness_min", opt.brightness_min},
        {"brightness_max", opt.brightness_max},
    };
    run["seed"] = opt.seed;
    run["threads"] = opt.threads;
    run["dice_style"] = opt.dice_style;
    run["resize"] = opt.resize.empty() ? json(nullptr) : json(opt.resize);
    run["with_ncc"] = opt.with_ncc;
    run["repeats"] = opt.repeats;

    std::ofstream out(fs::path(opt.output) / "run.json");
    if (!out) throw raindrop::IoError("cannot write run.json under '" + opt.output + "'");
    out << run.dump(2) << "\n";
}

void prepare_output(const Options& opt, const std::string& command) {
    std::error_code ec;
    fs::create_directories(opt.output, ec);
    if (ec) throw raindrop::IoError("cannot create output directory '" + opt.output + "'");
    write_run_json(opt, command);
}

std::vector<fs::path> collect_files(const std::string& input, const char* const* extensions,
                                    std::size_t extension_count) {
    std::vector<fs::path> files;
    const fs::path p(input);
    if (fs::is_directory(p)) {
        for (const auto& entry : fs::directory_iterator(p)) {
            if (!entry.is_regular_file()) continue;
            std::string ext = entry.path().extension().string();
            std::transform(ext.begin(), ext.end(), ext.begin(), ::tolower);
            for (std::size_t i = 0; i < extension_count; ++i) {
                if (ext == extensions[i]) {
                    files.push_back(entry.path());
                    break;
                }
            }
        }
        std::sort(files.begin(), files.end());
    } else if (fs::exists(p)) {
        files.push_back(p);
    } else {
        throw raindrop::IoError("input path '" + input + "' does not exist");
    }
    return files;
}

// --- commands -------------------------------------------------------------

int cmd_detect(const Options& opt, bool segmentation_only) {
    prepare_output(opt, segmentation_only ? "segment" : "detect");
    const auto manifest = raindrop::load_manifest(opt.input);
    const auto seq = maybe_resize(raindrop::load_sequence(manifest), opt);
    const auto params = detector_params(opt);

    const raindrop::DetectionResult result = raindrop::detect(seq, params);
    raindrop::save_mask_png(fs::path(opt.output) / "mask.png", result.mask);
    if (!segmentation_only) {
        raindrop::save_gray_png(fs::path(opt.output) / "averaged_gradient.png",
                                raindrop::normalize_for_view(result.averaged_gradient));
        std::cout << "detected=" << (result.detected ? "true" : "false")
                  << " fraction=" << fmt6(result.artifact_fraction) << "\n";
    }
    return kExitOk;
}

json drop_spec_json(const raindrop::DropSpec& spec) {
    return json{{"shape", static_cast<int>(spec.shape)},
                {"radius", spec.radius},
                {"center", {spec.center_x, spec.center_y}},
                {"alpha_brightness", spec.alpha_brightness},
                {"alpha_blur", spec.alpha_blur.size()},
                {"patch_blur", spec.patch_blur.size()},
                {"fisheye_strength", spec.fisheye_strength},
                {"darken_factor", spec.darken_factor}};
}

int cmd_synth(const Options& opt) {
    prepare_output(opt, "synth");
    const char* extensions[] = {".png", ".jpg", ".jpeg"};
    const auto files = collect_files(opt.input, extensions, 3);
    if (files.empty()) {
        throw raindrop::InputError("no input images found under '" + opt.input + "'");
    }
    raindrop::SynthConfig config = synth_config(opt);
    for (std::size_t i = 0; i < files.size(); ++i) {
        const raindrop::GrayImage img = raindrop::load_gray(files[i]);
        config.seed = opt.seed + i;  // per-file stream, still reproducible
        const raindrop::SynthResult result = raindrop::generate_drops(img, config);

        const std::string stem = files[i].stem().string();
        raindrop::save_gray_png(fs::path(opt.output) / (stem + "_synth.png"), result.image);
        raindrop::save_mask_png(fs::path(opt.output) / (stem + "_mask.png"), result.mask);

        json sidecar;
        sidecar["source"] = files[i].filename().string();
        sidecar["seed"] = config.seed;
        sidecar["drops"] = json::array();
        for (const auto& spec : result.drops) sidecar["drops"].push_back(drop_spec_json(spec));
        std::ofstream out(fs::path(opt.output) / (stem + "_drops.json"));
        if (!out) throw raindrop::IoError("cannot write drop sidecar for '" + stem + "'");
        out << sidecar.dump(2) << "\n";
    }
    std::cout << "synthesized drops on " << files.size() << " image(s)\n";
    return kExitOk;
}

int cmd_ingest(const Options& opt) {
    prepare_output(opt, "ingest");
    const char* extensions[] = {".json"};
    const auto manifests = collect_files(opt.input, extensions, 1);
    if (manifests.empty()) {
        throw raindrop::InputError("no sequence manifests under '" + opt.input + "'");
    }
    for (const auto& manifest_path : manifests) {
        const auto manifest = raindrop::load_manifest(manifest_path);
        const auto seq = raindrop::load_sequence(manifest);  // validates every frame
        const auto masks = raindrop::propagate_labels(manifest, seq.width(), seq.height());
        const fs::path seq_dir = fs::path(opt.output) / manifest.sequence_id;
        std::error_code ec;
        fs::create_directories(seq_dir, ec);
        if (ec) throw raindrop::IoError("cannot create '" + seq_dir.string() + "'");
        for (std::size_t i = 0; i < masks.size(); ++i) {
            char name[32];
            std::snprintf(name, sizeof(name), "mask_%05zu.png", i);
            raindrop::save_mask_png(seq_dir / name, masks[i]);
        }
        std::cout << "ingested '" << manifest.sequence_id << "': " << seq.frame_count()
                  << " frames, " << manifest.keyframe_annotations.size() << " keyframe(s)\n";
    }
    return kExitOk;
}

std::vector<raindrop::SequenceSample> load_samples(const Options& opt) {
    std::vector<fs::path> manifest_paths;
    const fs::path input(opt.input);
    if (fs::is_directory(input)) {
        const char* extensions[] = {".json"};
        manifest_paths = collect_files(opt.input, extensions, 1);
    } else {
        // a list file: one manifest path per line
        std::ifstream in(input);
        if (!in) throw raindrop::IoError("cannot open manifest list '" + opt.input + "'");
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            fs::path p(line);
            manifest_paths.push_back(p.is_absolute() ? p : input.parent_path() / p);
        }
    }
    if (manifest_paths.empty()) {
        throw raindrop::InputError("no manifests found under '" + opt.input + "'");
    }
    std::vector<raindrop::SequenceSample> samples;
    for (const auto& path : manifest_paths) {
        const auto manifest = raindrop::load_manifest(path);
        raindrop::SequenceSample sample;
        sample.seq = maybe_resize(raindrop::load_sequence(manifest), opt);
        sample.has_drops = manifest.has_drops;
        samples.push_back(std::move(sample));
    }
    return samples;
}

void write_sweep_csvs(const fs::path& outdir, const std::string& tag,
                      const std::vector<raindrop::SequenceSample>& samples,
                      const std::vector<double>& thresholds,
                      const raindrop::SweepResult& sweep) {
    std::ofstream roc(outdir / ("roc_" + tag + ".csv"));
    roc << "t_b,fpr,tpr\n";
    for (const auto& p : sweep.curve.points) {
        roc << fmt6(p.threshold) << "," << fmt6(p.fpr) << "," << fmt6(p.tpr) << "\n";
    }
    std::ofstream metrics(outdir / ("metrics_" + tag + ".csv"));
    metrics << "sequence_id,t_b,detected,fraction\n";
    for (std::size_t t = 0; t < thresholds.size(); ++t) {
        for (std::size_t s = 0; s < samples.size(); ++s) {
            const auto& d = sweep.detections[t][s];
            metrics << samples[s].seq.source_id << "," << fmt6(thresholds[t]) << ","
                    << (d.detected ? "true" : "false") << "," << fmt6(d.fraction) << "\n";
        }
    }
}

int cmd_eval_roc(const Options& opt) {
    prepare_output(opt, "eval-roc");
    const auto samples = load_samples(opt);
    const auto thresholds = raindrop::default_threshold_sweep();

    const auto grad_sweep =
        raindrop::roc_sweep(samples, raindrop::gradient_sweep_detector(detector_params(opt)),
                            thresholds);
    const double grad_auc = raindrop::auc(grad_sweep.curve);
    write_sweep_csvs(opt.output, "grad", samples, thresholds, grad_sweep);

    std::optional<double> ncc_auc;
    if (opt.with_ncc) {
        const auto ncc_sweep = raindrop::roc_sweep(
            samples, raindrop::ncc_sweep_detector(ncc_params(opt)), thresholds);
        ncc_auc = raindrop::auc(ncc_sweep.curve);
        write_sweep_csvs(opt.output, "ncc", samples, thresholds, ncc_sweep);
    }

    long long positives = 0;
    for (const auto& s : samples) positives += s.has_drops ? 1 : 0;

    std::ofstream summary(fs::path(opt.output) / "summary.json");
    summary << "{\n  \"auc_gradient\": " << fmt6(grad_auc);
    if (ncc_auc) summary << ",\n  \"auc_ncc\": " << fmt6(*ncc_auc);
    summary << ",\n  \"sequences\": " << samples.size() << ",\n  \"positives\": " << positives
            << ",\n  \"negatives\": " << (static_cast<long long>(samples.size()) - positives)
            << "\n}\n";

    std::cout << "auc_gradient=" << fmt6(grad_auc);
    if (ncc_auc) std::cout << " auc_ncc=" << fmt6(*ncc_auc);
    std::cout << "\n";
    return kExitOk;
}

int cmd_eval_seg(const Options& opt) {
    prepare_output(opt, "eval-seg");
    if (opt.gt.empty()) {
        throw raindrop::ParameterError("eval-seg requires --gt <ground truth mask dir>");
    }
    const char* extensions[] = {".png"};
    const auto pred_files = collect_files(opt.input, extensions, 1);
    if (pred_files.empty()) {
        throw raindrop::InputError("no predicted masks under '" + opt.input + "'");
    }
    const raindrop::DiceStyle style = opt.dice_style == "literal" ? raindrop::DiceStyle::Literal
                                                                  : raindrop::DiceStyle::Doubled;

    std::ofstream csv(fs::path(opt.output) / "seg_scores.csv");
    csv << "name,iou,dice,accuracy\n";
    std::vector<std::pair<long long, long long>> counts;
    double sum_iou = 0, sum_dice = 0, sum_acc = 0;
    for (const auto& pred_path : pred_files) {
        const fs::path gt_path = fs::path(opt.gt) / pred_path.filename();
        if (!fs::exists(gt_path)) {
            throw raindrop::IoError("missing ground truth mask '" + gt_path.string() + "'");
        }
        const auto pred = raindrop::load_mask(pred_path);
        const auto gt = raindrop::load_mask(gt_path);
        const auto scores = raindrop::seg_scores(pred, gt);
        counts.push_back(raindrop::dice_counts(pred, gt));
        sum_iou += scores.iou;
        sum_dice += scores.dice;
        sum_acc += scores.accuracy;
        csv << pred_path.filename().string() << "," << fmt6(scores.iou) << ","
            << fmt6(scores.dice) << "," << fmt6(scores.accuracy) << "\n";
    }
    const double n = static_cast<double>(pred_files.size());
    const double acc_dice = raindrop::accumulated_dice(counts, style);

    std::ofstream summary(fs::path(opt.output) / "summary.json");
    summary << "{\n  \"mean_iou\": " << fmt6(sum_iou / n)
            << ",\n  \"mean_dice\": " << fmt6(sum_dice / n)
            << ",\n  \"mean_accuracy\": " << fmt6(sum_acc / n)
            << ",\n  \"accumulated_dice\": " << fmt6(acc_dice) << ",\n  \"dice_style\": \""
            << opt.dice_style << "\",\n  \"pairs\": " << pred_files.size() << "\n}\n";

    std::cout << "mean_iou=" << fmt6(sum_iou / n) << " mean_dice=" << fmt6(sum_dice / n)
              << " accumulated_dice=" << fmt6(acc_dice) << "\n";
    return kExitOk;
}

int cmd_bench(const Options& opt) {
    prepare_output(opt, "bench");
    const auto manifest = raindrop::load_manifest(opt.input);
    const auto seq = maybe_resize(raindrop::load_sequence(manifest), opt);
    const auto report =
        raindrop::bench_pipeline(seq, detector_params(opt), ncc_params(opt), opt.repeats);

    std::ofstream timing(fs::path(opt.output) / "timing.json");
    timing << "{\n  \"gradient_total_ms\": " << fmt6(report.gradient_total_ms)
           << ",\n  \"ncc_total_ms\": " << fmt6(report.ncc_total_ms) << ",\n  \"stages\": {";
    for (std::size_t i = 0; i < report.gradient_stages.size(); ++i) {
        timing << (i ? ", " : "") << "\"" << report.gradient_stages[i].name
               << "\": " << fmt6(report.gradient_stages[i].median_ms);
    }
    timing << "},\n  \"stage_sum_ms\": " << fmt6(report.stage_sum_ms)
           << ",\n  \"repeats\": " << report.repeats << ",\n  \"threads\": " << report.threads
           << ",\n  \"frames\": " << seq.frame_count() << ",\n  \"width\": " << seq.width()
           << ",\n  \"height\": " << seq.height() << "\n}\n";

    std::cout << "gradient_ms=" << fmt6(report.gradient_total_ms)
              << " ncc_ms=" << fmt6(report.ncc_total_ms) << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Raindrop detection on image sequences: averaged-gradient detector, "
                 "NCC baseline, synthetic drop generator, dataset tools"};
    app.require_subcommand(1);

    Options opt;

    const auto add_common = [&](CLI::App* cmd, bool with_detector = true) {
        cmd->add_option("--input", opt.input, "input path")->required();
        cmd->add_option("--output", opt.output, "output directory (default: .)");
        cmd->add_option("--threads", opt.threads, "worker threads (results are identical)");
        cmd->add_option("--seed", opt.seed, "seed for randomized stages");
        if (with_detector) {
            cmd->add_option("--sobel", opt.sobel, "Sobel aperture, 3 or 5");
            cmd->add_option("--gauss-d", opt.gauss_d, "Gaussian kernel size d (odd)");
            cmd->add_option("--tb", opt.tb, "binarization threshold T_b in [0,1]");
            cmd->add_option("--dilate-m", opt.dilate_m, "dilation kernel size m (odd)");
            cmd->add_option("--td", opt.td, "detection threshold T_d in [0,1]");
            cmd->add_option("--resize", opt.resize, "resize frames to WxH before processing");
        }
    };

    CLI::App* detect = app.add_subcommand("detect", "classify a sequence manifest");
    add_common(detect);

    CLI::App* segment = app.add_subcommand("segment", "segment a sequence manifest");
    add_common(segment);

    CLI::App* synth = app.add_subcommand("synth", "render synthetic raindrops");
    add_common(synth, false);
    synth->add_option("--drops-min", opt.drops_min, "min drops per image");
    synth->add_option("--drops-max", opt.drops_max, "max drops per image");
    synth->add_option("--r-min", opt.r_min, "min drop radius (px)");
    synth->add_option("--r-max", opt.r_max, "max drop radius (px)");
    synth->add_option("--brightness-min", opt.brightness_min, "min alpha brightness");
    synth->add_option("--brightness-max", opt.brightness_max, "max alpha brightness");

    CLI::App* ingest = app.add_subcommand("ingest", "validate + rasterize a dataset sequence");
    add_common(ingest, false);

    CLI::App* eval_roc = app.add_subcommand("eval-roc", "ROC sweep over labeled manifests");
    add_common(eval_roc);
    eval_roc->add_option("--ncc-window", opt.ncc_window, "NCC window size (odd)");
    eval_roc->add_option("--ncc-tc", opt.ncc_tc, "NCC correlation threshold");
    eval_roc->add_flag("--ncc", opt.with_ncc, "also sweep the NCC baseline");

    CLI::App* eval_seg = app.add_subcommand("eval-seg", "score predicted masks vs ground truth");
    add_common(eval_seg, false);
    eval_seg->add_option("--gt", opt.gt, "ground truth mask directory");
    eval_seg->add_option("--dice-style", opt.dice_style, "accumulated dice style")
        ->check(CLI::IsMember({"doubled", "literal"}));

    CLI::App* bench = app.add_subcommand("bench", "time gradient pipeline vs NCC");
    add_common(bench);
    bench->add_option("--ncc-window", opt.ncc_window, "NCC window size (odd)");
    bench->add_option("--ncc-tc", opt.ncc_tc, "NCC correlation threshold");
    bench->add_option("--repeats", opt.repeats, "timing repeats (median is reported)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (opt.threads < 1) {
            throw raindrop::ParameterError("--threads must be >= 1");
        }
        raindrop::set_worker_threads(opt.threads);
        if (detect->parsed()) return cmd_detect(opt, false);
        if (segment->parsed()) return cmd_detect(opt, true);
        if (synth->parsed()) return cmd_synth(opt);
        if (ingest->parsed()) return cmd_ingest(opt);
        if (eval_roc->parsed()) return cmd_eval_roc(opt);
        if (eval_seg->parsed()) return cmd_eval_seg(opt);
        if (bench->parsed()) return cmd_bench(opt);
        std::cerr << "error: no command\n";
        return kExitUsage;
    } catch (const raindrop::ParameterError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const raindrop::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const raindrop::Error& e) {  // parse, input, dimension
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
}
