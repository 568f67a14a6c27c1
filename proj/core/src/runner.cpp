#include "bls/runner.hpp"

#include <json.hpp>

#include <chrono>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace bls {

namespace {

using nlohmann::json;

double percent_correct(const std::vector<int>& predicted, const std::vector<int>& truth) {
    if (predicted.size() != truth.size() || truth.empty()) return 0.0;
    std::size_t hits = 0;
    for (std::size_t i = 0; i < truth.size(); ++i)
        if (predicted[i] == truth[i]) ++hits;
    return 100.0 * static_cast<double>(hits) / static_cast<double>(truth.size());
}

json schedule_to_json(const Schedule& s) {
    json steps = json::array();
    for (const auto& st : s.steps) {
        steps.push_back({{"addFeatureNodes", st.addFeatureNodes},
                         {"addCorrespondingEnh", st.addCorrespondingEnh},
                         {"addExtraEnh", st.addExtraEnh}});
    }
    return {{"init",
             {{"featureGroups", s.featureGroups},
              {"featureNodesPerGroup", s.featureNodesPerGroup},
              {"enhancementNodes", s.enhancementNodes}}},
            {"steps", steps}};
}

Schedule schedule_from_json(const json& j) {
    Schedule s;
    const auto& init = j.at("init");
    s.featureGroups = init.at("featureGroups").get<Index>();
    s.featureNodesPerGroup = init.at("featureNodesPerGroup").get<Index>();
    s.enhancementNodes = init.at("enhancementNodes").get<Index>();
    if (j.contains("steps")) {
        for (const auto& st : j.at("steps")) {
            ScheduleStep step;
            step.addFeatureNodes = st.value<Index>("addFeatureNodes", 0);
            step.addCorrespondingEnh = st.value<Index>("addCorrespondingEnh", 0);
            step.addExtraEnh = st.value<Index>("addExtraEnh", 0);
            s.steps.push_back(step);
        }
    }
    s.validate();
    return s;
}

std::string default_mnist(const std::string& given, const char* name) {
    if (!given.empty()) return given;
    return data_dir() + "/mnist/" + name;
}

}  // namespace

void Schedule::validate() const {
    if (featureGroups < 1 || featureNodesPerGroup < 1) {
        throw std::invalid_argument("schedule: at least one initial feature group of size >= 1");
    }
    if (enhancementNodes < 0) {
        throw std::invalid_argument("schedule: initial enhancement count must be >= 0");
    }
    for (std::size_t i = 0; i < steps.size(); ++i) {
        const auto& st = steps[i];
        if (st.addFeatureNodes < 0 || st.addCorrespondingEnh < 0 || st.addExtraEnh < 0) {
            throw std::invalid_argument("schedule: negative count in step " + std::to_string(i));
        }
        if (st.addFeatureNodes + st.addCorrespondingEnh + st.addExtraEnh == 0) {
            throw std::invalid_argument("schedule: step " + std::to_string(i) + " adds nothing");
        }
        if (st.addFeatureNodes == 0 && st.addCorrespondingEnh > 0) {
            throw std::invalid_argument("schedule: step " + std::to_string(i) +
                                        " adds corresponding enhancement nodes without feature nodes");
        }
    }
}

Schedule paper_schedule() {
    Schedule s;
    s.featureGroups = 10;
    s.featureNodesPerGroup = 6;
    s.enhancementNodes = 3000;
    for (int i = 0; i < 4; ++i) s.steps.push_back({10, 750, 1250});
    return s;
}

Schedule parse_schedule(const std::string& pathOrPreset) {
    if (pathOrPreset == "preset:paper") return paper_schedule();
    if (pathOrPreset.rfind("preset:", 0) == 0) {
        throw std::invalid_argument("unknown schedule preset '" + pathOrPreset + "'");
    }
    std::ifstream is(pathOrPreset);
    if (!is) throw std::runtime_error("cannot open schedule file: " + pathOrPreset);
    json j;
    is >> j;
    return schedule_from_json(j);
}

RunReport run_benchmark(const RunConfig& config) {
    Dataset train, test;
    std::string description;
    const DataConfig& d = config.data;
    if (d.kind == "mnist") {
        train = load_idx(default_mnist(d.images, "train-images-idx3-ubyte"),
                         default_mnist(d.labels, "train-labels-idx1-ubyte"));
        test = load_idx(default_mnist(d.testImages, "t10k-images-idx3-ubyte"),
                        default_mnist(d.testLabels, "t10k-labels-idx1-ubyte"));
        description = "mnist l=" + std::to_string(train.samples());
    } else if (d.kind == "csv") {
        Dataset full = load_csv(d.csvPath, d.labelColumn, d.csvHeader);
        const Index trainRows =
            std::max<Index>(1, static_cast<Index>((1.0 - d.holdout) * full.samples()));
        train = full.head(trainRows);
        test.X = full.X.bottomRows(full.samples() - trainRows);
        test.Y = full.Y.bottomRows(full.samples() - trainRows);
        test.labels.assign(full.labels.begin() + trainRows, full.labels.end());
        description = "csv " + d.csvPath;
    } else if (d.kind == "synth") {
        Dataset full = synth_blobs(d.synthSeed, d.synthSamples, d.synthFeatures, d.synthClasses,
                                   d.synthSeparation);
        const Index trainRows =
            std::max<Index>(1, static_cast<Index>((1.0 - d.holdout) * full.samples()));
        train = full.head(trainRows);
        test.X = full.X.bottomRows(full.samples() - trainRows);
        test.Y = full.Y.bottomRows(full.samples() - trainRows);
        test.labels.assign(full.labels.begin() + trainRows, full.labels.end());
        std::ostringstream os;
        os << "synth seed=" << d.synthSeed << " l=" << d.synthSamples << " d=" << d.synthFeatures
           << " c=" << d.synthClasses << " sep=" << d.synthSeparation;
        description = os.str();
    } else {
        throw std::invalid_argument("unknown dataset kind '" + d.kind +
                                    "' (expected mnist|csv|synth)");
    }
    RunReport report = run_benchmark_on(config, train, test);
    report.datasetDescription = description;
    return report;
}

RunReport run_benchmark_on(const RunConfig& config, const Dataset& train, const Dataset& test) {
    config.schedule.validate();
    using Clock = std::chrono::steady_clock;

    NetworkConfig nc;
    nc.solver = config.solver;
    nc.lambda = config.lambda;
    nc.seed = config.seed;
    nc.enhancementScale = config.scale;

    RunReport report;
    report.solver = to_string(config.solver);
    report.lambda = config.lambda;
    report.seed = config.seed;
    report.scale = config.scale;
    report.reps = config.reps;
    report.schedule = config.schedule;

    const Schedule& s = config.schedule;
    const FlopAlgo algo = flop_algo_for(config.solver);
    const Index l = train.samples();
    const Index c = train.classes();

    auto t0 = Clock::now();
    BlsNetwork net = BlsNetwork::build_initial(train.X, train.Y, s.featureGroups,
                                               s.featureNodesPerGroup, s.enhancementNodes > 0 ? 1 : 0,
                                               s.enhancementNodes, nc, config.reps);
    double stepSeconds = std::chrono::duration<double>(Clock::now() - t0).count();

    double accum = 0.0;
    auto snapshot = [&](double solverSeconds, double wallSeconds, double flops) {
        StepReport row;
        row.featureNodes = net.featureColumns();
        row.enhancementNodes = net.enhancementColumns();
        row.trainAccuracy = percent_correct(net.classify(train.X), train.labels);
        row.testAccuracy = percent_correct(net.classify(test.X), test.labels);
        row.solverSeconds = solverSeconds;
        row.additionalTimeSec = wallSeconds;
        accum += wallSeconds;
        row.accumulativeTimeSec = accum;
        row.predictedFlops = flops;
        report.rows.push_back(row);
    };

    snapshot(net.initSolverSeconds(), stepSeconds,
             flops_init({1, net.totalColumns(), l, c}, algo));

    for (std::size_t i = 0; i < s.steps.size(); ++i) {
        const auto& st = s.steps[i];
        const Index kBefore = net.totalColumns();
        AddResult r;
        auto u0 = Clock::now();
        try {
            if (st.addFeatureNodes > 0) {
                r = net.add_feature_nodes(st.addFeatureNodes, st.addCorrespondingEnh,
                                          st.addExtraEnh, train.Y, config.reps);
            } else {
                r = net.add_enhancement_nodes(st.addExtraEnh, train.Y, config.reps);
            }
        } catch (const std::exception& e) {
            throw std::runtime_error("step " + std::to_string(i + 1) + " of " +
                                     std::to_string(s.steps.size()) + " (solver " +
                                     report.solver + "): " + e.what());
        }
        double wall = std::chrono::duration<double>(Clock::now() - u0).count();
        snapshot(r.solverSeconds, wall,
                 flops_per_update({r.addedColumns, kBefore, l, c}, algo));
    }
    return report;
}

std::string RunReport::to_json() const {
    json rowsJson = json::array();
    for (const auto& r : rows) {
        rowsJson.push_back({{"featureNodes", r.featureNodes},
                            {"enhancementNodes", r.enhancementNodes},
                            {"trainAccuracy", r.trainAccuracy},
                            {"testAccuracy", r.testAccuracy},
                            {"solverSeconds", r.solverSeconds},
                            {"additionalTimeSec", r.additionalTimeSec},
                            {"accumulativeTimeSec", r.accumulativeTimeSec},
                            {"predictedFlops", r.predictedFlops}});
    }
    json j = {{"solver", solver},         {"lambda", lambda},
              {"seed", seed},             {"scale", scale},
              {"reps", reps},             {"dataset", datasetDescription},
              {"schedule", schedule_to_json(schedule)}, {"rows", rowsJson}};
    return j.dump(2);
}

RunReport RunReport::from_json(const std::string& text) {
    json j = json::parse(text);
    RunReport r;
    r.solver = j.at("solver").get<std::string>();
    r.lambda = j.at("lambda").get<double>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.scale = j.at("scale").get<double>();
    r.reps = j.at("reps").get<int>();
    r.datasetDescription = j.value("dataset", "");
    r.schedule = schedule_from_json(j.at("schedule"));
    for (const auto& row : j.at("rows")) {
        StepReport sr;
        sr.featureNodes = row.at("featureNodes").get<Index>();
        sr.enhancementNodes = row.at("enhancementNodes").get<Index>();
        sr.trainAccuracy = row.at("trainAccuracy").get<double>();
        sr.testAccuracy = row.at("testAccuracy").get<double>();
        sr.solverSeconds = row.at("solverSeconds").get<double>();
        sr.additionalTimeSec = row.at("additionalTimeSec").get<double>();
        sr.accumulativeTimeSec = row.at("accumulativeTimeSec").get<double>();
        sr.predictedFlops = row.at("predictedFlops").get<double>();
        r.rows.push_back(sr);
    }
    return r;
}

void write_report_table(std::ostream& os, const RunReport& report) {
    os << "solver=" << report.solver << " lambda=" << report.lambda << " seed=" << report.seed
       << " scale=" << report.scale << " reps=" << report.reps;
    if (!report.datasetDescription.empty()) os << " dataset=[" << report.datasetDescription << "]";
    os << "\n";
    os << std::setw(8) << "feat" << std::setw(8) << "enh" << std::setw(10) << "train%"
       << std::setw(10) << "test%" << std::setw(12) << "solver_s" << std::setw(12) << "step_s"
       << std::setw(12) << "accum_s" << std::setw(14) << "Gflops" << "\n";
    for (const auto& r : report.rows) {
        os << std::setw(8) << r.featureNodes << std::setw(8) << r.enhancementNodes << std::fixed
           << std::setprecision(2) << std::setw(10) << r.trainAccuracy << std::setw(10)
           << r.testAccuracy << std::setprecision(4) << std::setw(12) << r.solverSeconds
           << std::setw(12) << r.additionalTimeSec << std::setw(12) << r.accumulativeTimeSec
           << std::setprecision(3) << std::setw(14) << r.predictedFlops / 1e9 << "\n";
        os.unsetf(std::ios::fixed);
    }
}

Comparison compare_reports(const std::vector<RunReport>& reports) {
    if (reports.size() < 2) {
        throw std::invalid_argument("compare: need at least two reports");
    }
    for (std::size_t i = 1; i < reports.size(); ++i) {
        if (!(reports[i].schedule == reports.front().schedule)) {
            throw std::invalid_argument("compare: report " + std::to_string(i) + " (" +
                                        reports[i].solver + ") ran a different schedule");
        }
        if (reports[i].rows.size() != reports.front().rows.size()) {
            throw std::invalid_argument("compare: report " + std::to_string(i) +
                                        " has a different row count");
        }
    }
    Comparison cmp;
    cmp.reports = reports;
    cmp.baseline = 0;
    for (std::size_t i = 0; i < reports.size(); ++i) {
        if (reports[i].solver == to_string(SolverKind::CholStable)) {
            cmp.baseline = i;
            break;
        }
    }
    const auto& base = cmp.reports[cmp.baseline];
    for (const auto& rep : cmp.reports) {
        std::vector<double> s;
        for (std::size_t row = 0; row < rep.rows.size(); ++row) {
            const double denom = base.rows[row].solverSeconds;
            s.push_back(denom > 0.0 ? rep.rows[row].solverSeconds / denom : 0.0);
        }
        cmp.speedups.push_back(std::move(s));
    }
    return cmp;
}

void write_comparison_table(std::ostream& os, const Comparison& cmp) {
    const auto& base = cmp.reports[cmp.baseline];
    os << "baseline: " << base.solver << " (lambda=" << base.lambda << ")\n";
    os << std::setw(8) << "feat" << std::setw(8) << "enh";
    for (const auto& rep : cmp.reports) {
        os << std::setw(16) << (rep.solver + " test%") << std::setw(16) << (rep.solver + " s")
           << std::setw(16) << (rep.solver + " x");
    }
    os << "\n";
    for (std::size_t row = 0; row < base.rows.size(); ++row) {
        os << std::setw(8) << base.rows[row].featureNodes << std::setw(8)
           << base.rows[row].enhancementNodes;
        for (std::size_t i = 0; i < cmp.reports.size(); ++i) {
            const auto& r = cmp.reports[i].rows[row];
            os << std::fixed << std::setprecision(2) << std::setw(16) << r.testAccuracy
               << std::setprecision(4) << std::setw(16) << r.solverSeconds << std::setprecision(2)
               << std::setw(16) << cmp.speedups[i][row];
            os.unsetf(std::ios::fixed);
        }
        os << "\n";
    }
}

}  // namespace bls
