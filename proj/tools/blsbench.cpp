#include "bls/runner.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

int run_train(const bls::RunConfig& config, const std::string& reportPath) {
    bls::RunReport report = bls::run_benchmark(config);
    bls::write_report_table(std::cout, report);
    if (!reportPath.empty()) {
        std::ofstream os(reportPath);
        if (!os) throw std::runtime_error("cannot open report file: " + reportPath);
        os << report.to_json() << "\n";
        std::cout << "report written to " << reportPath << "\n";
    }
    return 0;
}

int run_compare(const std::vector<std::string>& paths) {
    std::vector<bls::RunReport> reports;
    for (const auto& p : paths) {
        std::ifstream is(p);
        if (!is) throw std::runtime_error("cannot open report file: " + p);
        std::stringstream buf;
        buf << is.rdbuf();
        reports.push_back(bls::RunReport::from_json(buf.str()));
    }
    bls::Comparison cmp = bls::compare_reports(reports);
    bls::write_comparison_table(std::cout, cmp);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Incremental broad-learning benchmark: ridge solvers on added nodes"};
    app.require_subcommand(1);

    bls::RunConfig config;
    std::string scheduleArg = "preset:paper";
    std::string solverName = "chol";
    std::string reportPath;

    auto* train = app.add_subcommand("train", "run one solver through a node-insertion schedule");
    train->add_option("--dataset", config.data.kind, "mnist|csv|synth")->default_val("synth");
    train->add_option("--images", config.data.images, "idx images file (mnist)");
    train->add_option("--labels", config.data.labels, "idx labels file (mnist)");
    train->add_option("--test-images", config.data.testImages, "idx test images file (mnist)");
    train->add_option("--test-labels", config.data.testLabels, "idx test labels file (mnist)");
    train->add_option("--csv", config.data.csvPath, "csv file path");
    train->add_option("--label-column", config.data.labelColumn,
                      "csv label column (negative counts from the end)");
    train->add_flag("--csv-header", config.data.csvHeader, "csv file has a header row");
    train->add_option("--synth-seed", config.data.synthSeed);
    train->add_option("--synth-samples", config.data.synthSamples);
    train->add_option("--synth-features", config.data.synthFeatures);
    train->add_option("--synth-classes", config.data.synthClasses);
    train->add_option("--synth-separation", config.data.synthSeparation);
    train->add_option("--holdout", config.data.holdout, "test fraction for csv/synth");
    train->add_option("--solver", solverName, "chol|chol-plain|ridge-inv|gen-chol|gen-inv|standard");
    train->add_option("--lambda", config.lambda, "ridge parameter")->default_val(1e-8);
    train->add_option("--seed", config.seed, "network weight seed");
    train->add_option("--schedule", scheduleArg, "schedule JSON file or preset:paper");
    train->add_option("--scale", config.scale, "enhancement pre-activation scale");
    train->add_option("--reps", config.reps, "timing repetitions per update (median reported)");
    train->add_option("--report", reportPath, "write the full report as JSON");

    std::vector<std::string> reportFiles;
    auto* compare = app.add_subcommand("compare", "align reports and compute speedups");
    compare->add_option("--reports", reportFiles, "two or more report JSON files")
        ->required()
        ->expected(2, -1);

    CLI11_PARSE(app, argc, argv);

    try {
        if (train->parsed()) {
            config.solver = bls::solver_kind_from_string(solverName);
            config.schedule = bls::parse_schedule(scheduleArg);
            return run_train(config, reportPath);
        }
        return run_compare(reportFiles);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
