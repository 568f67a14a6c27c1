#pragma once

#include "bls/dataset.hpp"
#include "bls/flops.hpp"
#include "bls/network.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace bls {

// One node-insertion step. A pure enhancement step leaves addFeatureNodes
// at zero; addCorrespondingEnh requires addFeatureNodes > 0.
struct ScheduleStep {
    Index addFeatureNodes = 0;
    Index addCorrespondingEnh = 0;
    Index addExtraEnh = 0;

    bool operator==(const ScheduleStep&) const = default;
};

struct Schedule {
    Index featureGroups = 1;
    Index featureNodesPerGroup = 1;
    Index enhancementNodes = 1;
    std::vector<ScheduleStep> steps;

    bool operator==(const Schedule&) const = default;
    void validate() const;
};

// "preset:paper" or a JSON file path.
Schedule parse_schedule(const std::string& pathOrPreset);
Schedule paper_schedule();

struct DataConfig {
    std::string kind = "synth";  // mnist | csv | synth
    // mnist: resolved against data_dir() when relative
    std::string images, labels, testImages, testLabels;
    // csv
    std::string csvPath;
    int labelColumn = -1;
    bool csvHeader = false;
    // synth
    std::uint64_t synthSeed = 7;
    Index synthSamples = 1200;
    Index synthFeatures = 12;
    Index synthClasses = 4;
    double synthSeparation = 6.0;
    // csv/synth holdout fraction for the test split
    double holdout = 0.25;
};

struct RunConfig {
    DataConfig data;
    SolverKind solver = SolverKind::CholStable;
    double lambda = 1e-8;
    std::uint64_t seed = 1;
    double scale = 0.8;
    int reps = 5;  // timing repetitions per solver update, median reported
    Schedule schedule = {};
};

struct StepReport {
    Index featureNodes = 0;
    Index enhancementNodes = 0;
    double trainAccuracy = 0.0;
    double testAccuracy = 0.0;
    double solverSeconds = 0.0;        // solver init/update only
    double additionalTimeSec = 0.0;    // whole step including node generation
    double accumulativeTimeSec = 0.0;  // running sum of additionalTimeSec
    double predictedFlops = 0.0;
};

struct RunReport {
    std::string solver;
    double lambda = 0.0;
    std::uint64_t seed = 0;
    double scale = 0.8;
    int reps = 1;
    std::string datasetDescription;
    Schedule schedule;
    std::vector<StepReport> rows;  // rows[0] is the initial network

    std::string to_json() const;
    static RunReport from_json(const std::string& text);
};

// Executes the schedule: build the initial network, then one solver update
// per step, recording accuracy, wall-clock time and the predicted flops of
// the configured algorithm. Timing is meaningful only with exclusive use
// of the CPU; runs are single-threaded.
RunReport run_benchmark(const RunConfig& config);

// Same, against datasets supplied by the caller (used by the tests and the
// dataset-gated acceptance runs).
RunReport run_benchmark_on(const RunConfig& config, const Dataset& train, const Dataset& test);

void write_report_table(std::ostream& os, const RunReport& report);

struct Comparison {
    std::vector<RunReport> reports;
    std::size_t baseline = 0;                       // index of the time denominator
    std::vector<std::vector<double>> speedups;      // [report][step]
};

// Aligns >= 2 reports that ran the same schedule and computes per-step
// speedups time_other / time_baseline from the solver-update timings.
// The baseline is the first CholStable report when present, else the first.
Comparison compare_reports(const std::vector<RunReport>& reports);

void write_comparison_table(std::ostream& os, const Comparison& cmp);

}  // namespace bls
