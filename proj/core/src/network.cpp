#include "bls/network.hpp"

#include <chrono>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <vector>

namespace bls {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

const char* to_string(Activation a) {
    switch (a) {
        case Activation::Linear: return "linear";
        case Activation::Tansig: return "tansig";
        case Activation::Sigmoid: return "sigmoid";
    }
    return "?";
}

Activation activation_from_string(std::string_view name) {
    if (name == "linear") return Activation::Linear;
    if (name == "tansig") return Activation::Tansig;
    if (name == "sigmoid") return Activation::Sigmoid;
    throw std::invalid_argument("unknown activation '" + std::string(name) + "'");
}

Matrix apply_activation(Activation a, Matrix m) {
    switch (a) {
        case Activation::Linear: return m;
        case Activation::Tansig:
            return (2.0 / (1.0 + (-2.0 * m.array()).exp()) - 1.0).matrix();
        case Activation::Sigmoid: return (1.0 / (1.0 + (-m.array()).exp())).matrix();
    }
    return m;
}

Matrix FeatureGroup::map(const Matrix& x) const {
    Matrix pre = x * We;
    pre.rowwise() += beta.row(0);
    return apply_activation(activation, std::move(pre));
}

Matrix EnhancementGroup::map(const Matrix& allFeatureCols) const {
    if (featOffset + Wh.rows() > allFeatureCols.cols()) {
        throw std::invalid_argument("EnhancementGroup: span [" + std::to_string(featOffset) + ", " +
                                    std::to_string(featOffset + Wh.rows()) +
                                    ") exceeds available feature columns " +
                                    std::to_string(allFeatureCols.cols()));
    }
    Matrix pre = allFeatureCols.middleCols(featOffset, Wh.rows()) * Wh;
    pre.rowwise() += beta.row(0);
    pre *= scale;
    return apply_activation(activation, std::move(pre));
}

FeatureTuner make_sparse_autoencoder_tuner(int iterations, double shrink) {
    return [iterations, shrink](const Matrix& x, const Matrix& we, const Matrix& beta) -> Matrix {
        // ISTA on min ||Z0*T - X||_F^2 + shrink*||T||_1 where Z0 is the raw
        // random projection; the tuned weights are T'.
        Matrix z0 = x * we;
        z0.rowwise() += beta.row(0);
        Matrix g = z0.transpose() * z0;
        double lip = 2.0 * g.cwiseAbs().rowwise().sum().maxCoeff();  // >= 2*||G||_2
        if (lip <= 0.0) return we;
        const double step = 1.0 / lip;
        const double thr = shrink * step;
        Matrix t = Matrix::Zero(we.cols(), x.cols());
        Matrix ztx = z0.transpose() * x;
        for (int it = 0; it < iterations; ++it) {
            Matrix grad = 2.0 * (g * t - ztx);
            t -= step * grad;
            t = t.unaryExpr([thr](double v) {
                if (v > thr) return v - thr;
                if (v < -thr) return v + thr;
                return 0.0;
            });
        }
        return t.transpose();
    };
}

FeatureGroup BlsNetwork::draw_feature_group(Index fCount) {
    FeatureGroup g;
    g.We = rng_->uniform_matrix(trainX_.cols(), fCount);
    g.beta = rng_->uniform_matrix(1, fCount);
    g.activation = config_.featureActivation;
    if (config_.tuner) g.We = config_.tuner(trainX_, g.We, g.beta);
    return g;
}

EnhancementGroup BlsNetwork::draw_enhancement_group(Index eCount, Index featOffset, Index span) {
    EnhancementGroup g;
    g.Wh = rng_->uniform_matrix(span, eCount);
    g.beta = rng_->uniform_matrix(1, eCount);
    g.activation = config_.enhancementActivation;
    g.scale = config_.enhancementScale;
    g.featOffset = featOffset;
    return g;
}

Matrix BlsNetwork::feature_block(const Matrix& x) const {
    Index total = 0;
    for (const auto& g : featureGroups_) total += g.size();
    Matrix z(x.rows(), total);
    Index at = 0;
    for (const auto& g : featureGroups_) {
        z.middleCols(at, g.size()) = g.map(x);
        at += g.size();
    }
    return z;
}

Index BlsNetwork::featureColumns() const {
    Index total = 0;
    for (const auto& g : featureGroups_) total += g.size();
    return total;
}

Index BlsNetwork::enhancementColumns() const {
    Index total = 0;
    for (const auto& g : enhancementGroups_) total += g.size();
    return total;
}

const OutputSolver& BlsNetwork::solver() const {
    if (!solver_) throw std::logic_error("network has no attached solver (loaded snapshot?)");
    return *solver_;
}

void BlsNetwork::refresh_weights() {
    weights_ = solver_->weights();
}

BlsNetwork BlsNetwork::build_initial(const Matrix& x, const Matrix& y, Index nGroups,
                                     Index fPerGroup, Index mGroups, Index ePerGroup,
                                     const NetworkConfig& config, int timingReps) {
    if (x.rows() != y.rows()) {
        throw std::invalid_argument("build_initial: X is " + shape_of(x) + " but Y is " +
                                    shape_of(y));
    }
    if (nGroups < 1 || fPerGroup < 1) {
        throw std::invalid_argument("build_initial: at least one feature group of size >= 1 "
                                    "is required");
    }
    if (mGroups < 0 || (mGroups > 0 && ePerGroup < 1)) {
        throw std::invalid_argument("build_initial: invalid enhancement group configuration");
    }
    if (!(config.lambda > 0.0)) {
        throw std::invalid_argument("build_initial: lambda must be positive");
    }

    BlsNetwork net;
    net.config_ = config;
    net.rng_ = std::make_unique<UniformRng>(config.seed);
    net.trainX_ = x;

    for (Index i = 0; i < nGroups; ++i) net.featureGroups_.push_back(net.draw_feature_group(fPerGroup));
    net.trainZ_ = net.feature_block(x);
    for (Index i = 0; i < nGroups; ++i)
        net.segments_.push_back({Segment::Kind::Feature, static_cast<std::uint32_t>(i)});

    const Index featCols = net.trainZ_.cols();
    Matrix a(x.rows(), featCols + mGroups * ePerGroup);
    a.leftCols(featCols) = net.trainZ_;
    Index at = featCols;
    for (Index j = 0; j < mGroups; ++j) {
        net.enhancementGroups_.push_back(net.draw_enhancement_group(ePerGroup, 0, featCols));
        a.middleCols(at, ePerGroup) = net.enhancementGroups_.back().map(net.trainZ_);
        net.segments_.push_back({Segment::Kind::Enhancement, static_cast<std::uint32_t>(j)});
        at += ePerGroup;
    }
    net.allFeatureEnhGroups_ = mGroups;

    std::vector<double> times;
    for (int rep = 0; rep + 1 < timingReps; ++rep) {
        auto scratch = make_solver(config.solver);
        auto t0 = Clock::now();
        scratch->init(a, y, config.lambda);
        times.push_back(seconds_since(t0));
    }
    net.solver_ = make_solver(config.solver);
    auto t0 = Clock::now();
    net.solver_->init(a, y, config.lambda);
    times.push_back(seconds_since(t0));
    net.initSolverSeconds_ = median(std::move(times));
    net.refresh_weights();
    return net;
}

AddResult BlsNetwork::add_enhancement_nodes(Index count, const Matrix& y, int timingReps) {
    if (!solver_) throw std::logic_error("add_enhancement_nodes: network is not trainable");
    if (count < 1) throw std::invalid_argument("add_enhancement_nodes: count must be >= 1");
    auto step0 = Clock::now();

    enhancementGroups_.push_back(draw_enhancement_group(count, 0, trainZ_.cols()));
    ++allFeatureEnhGroups_;
    Matrix h = enhancementGroups_.back().map(trainZ_);
    segments_.push_back(
        {Segment::Kind::Enhancement, static_cast<std::uint32_t>(enhancementGroups_.size() - 1)});

    std::vector<double> times;
    for (int rep = 0; rep + 1 < timingReps; ++rep) {
        auto scratch = solver_->clone();
        auto t0 = Clock::now();
        scratch->update(h, y);
        times.push_back(seconds_since(t0));
    }
    auto t0 = Clock::now();
    solver_->update(h, y);
    times.push_back(seconds_since(t0));
    refresh_weights();

    AddResult r;
    r.addedColumns = count;
    r.solverSeconds = median(std::move(times));
    r.stepSeconds = seconds_since(step0);
    return r;
}

AddResult BlsNetwork::add_feature_nodes(Index fCount, Index correspondingEnh, Index extraEnh,
                                        const Matrix& y, int timingReps) {
    if (!solver_) throw std::logic_error("add_feature_nodes: network is not trainable");
    if (fCount < 1) throw std::invalid_argument("add_feature_nodes: fCount must be >= 1");
    if (correspondingEnh < 0 || extraEnh < 0) {
        throw std::invalid_argument("add_feature_nodes: enhancement counts must be >= 0");
    }
    auto step0 = Clock::now();

    const Index newOffset = trainZ_.cols();
    featureGroups_.push_back(draw_feature_group(fCount));
    Matrix z = featureGroups_.back().map(trainX_);
    segments_.push_back(
        {Segment::Kind::Feature, static_cast<std::uint32_t>(featureGroups_.size() - 1)});

    Matrix zext(trainZ_.rows(), newOffset + fCount);
    zext.leftCols(newOffset) = trainZ_;
    zext.rightCols(fCount) = z;
    trainZ_ = std::move(zext);

    // Corresponding enhancement nodes read only the new feature columns;
    // the total is split as evenly as possible over the existing
    // all-feature groups.
    std::vector<Index> extCounts;
    if (correspondingEnh > 0) {
        const Index groups = std::max<Index>(1, allFeatureEnhGroups_);
        const Index base = correspondingEnh / groups;
        const Index rem = correspondingEnh % groups;
        for (Index i = 0; i < groups; ++i) {
            const Index c = base + (i < rem ? 1 : 0);
            if (c > 0) extCounts.push_back(c);
        }
    }

    Index hCols = fCount + correspondingEnh + extraEnh;
    Matrix h(trainX_.rows(), hCols);
    h.leftCols(fCount) = trainZ_.rightCols(fCount);
    Index at = fCount;
    for (Index c : extCounts) {
        enhancementGroups_.push_back(draw_enhancement_group(c, newOffset, fCount));
        h.middleCols(at, c) = enhancementGroups_.back().map(trainZ_);
        segments_.push_back(
            {Segment::Kind::Enhancement, static_cast<std::uint32_t>(enhancementGroups_.size() - 1)});
        at += c;
    }
    if (extraEnh > 0) {
        enhancementGroups_.push_back(draw_enhancement_group(extraEnh, 0, trainZ_.cols()));
        ++allFeatureEnhGroups_;
        h.middleCols(at, extraEnh) = enhancementGroups_.back().map(trainZ_);
        segments_.push_back(
            {Segment::Kind::Enhancement, static_cast<std::uint32_t>(enhancementGroups_.size() - 1)});
    }

    std::vector<double> times;
    for (int rep = 0; rep + 1 < timingReps; ++rep) {
        auto scratch = solver_->clone();
        auto t0 = Clock::now();
        scratch->update(h, y);
        times.push_back(seconds_since(t0));
    }
    auto t0 = Clock::now();
    solver_->update(h, y);
    times.push_back(seconds_since(t0));
    refresh_weights();

    AddResult r;
    r.addedColumns = hCols;
    r.solverSeconds = median(std::move(times));
    r.stepSeconds = seconds_since(step0);
    return r;
}

Matrix BlsNetwork::assemble(const Matrix& x) const {
    Matrix z = feature_block(x);
    std::vector<Index> featStart(featureGroups_.size());
    Index at = 0;
    for (std::size_t i = 0; i < featureGroups_.size(); ++i) {
        featStart[i] = at;
        at += featureGroups_[i].size();
    }
    Matrix a(x.rows(), totalColumns());
    at = 0;
    for (const auto& seg : segments_) {
        if (seg.kind == Segment::Kind::Feature) {
            const auto& g = featureGroups_[seg.index];
            a.middleCols(at, g.size()) = z.middleCols(featStart[seg.index], g.size());
            at += g.size();
        } else {
            const auto& g = enhancementGroups_[seg.index];
            a.middleCols(at, g.size()) = g.map(z);
            at += g.size();
        }
    }
    return a;
}

Matrix BlsNetwork::predict(const Matrix& x) const {
    if (!featureGroups_.empty() && x.cols() != featureGroups_.front().We.rows()) {
        throw std::invalid_argument("predict: X has " + std::to_string(x.cols()) +
                                    " columns, network expects " +
                                    std::to_string(featureGroups_.front().We.rows()));
    }
    return assemble(x) * weights_;
}

std::vector<int> BlsNetwork::classify(const Matrix& x) const {
    Matrix yhat = predict(x);
    std::vector<int> out(static_cast<std::size_t>(yhat.rows()));
    for (Index i = 0; i < yhat.rows(); ++i) {
        int best = 0;
        double bestVal = yhat(i, 0);
        for (Index j = 1; j < yhat.cols(); ++j) {
            if (yhat(i, j) > bestVal) {  // ties keep the lowest index
                bestVal = yhat(i, j);
                best = static_cast<int>(j);
            }
        }
        out[static_cast<std::size_t>(i)] = best;
    }
    return out;
}

// --------------------------------------------------------------------------
// Snapshot I/O: little-endian fixed-width fields, raw IEEE-754 doubles.
// --------------------------------------------------------------------------

namespace {

constexpr char kMagic[8] = {'B', 'L', 'S', 'N', 'E', 'T', '1', '\0'};

void put_u64(std::ostream& os, std::uint64_t v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

void put_f64(std::ostream& os, double v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

void put_u8(std::ostream& os, std::uint8_t v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

void put_matrix(std::ostream& os, const Matrix& m) {
    put_u64(os, static_cast<std::uint64_t>(m.rows()));
    put_u64(os, static_cast<std::uint64_t>(m.cols()));
    os.write(reinterpret_cast<const char*>(m.data()),
             static_cast<std::streamsize>(sizeof(double) * m.size()));
}

std::uint64_t get_u64(std::istream& is) {
    std::uint64_t v = 0;
    is.read(reinterpret_cast<char*>(&v), sizeof v);
    if (!is) throw std::runtime_error("snapshot truncated");
    return v;
}

double get_f64(std::istream& is) {
    double v = 0;
    is.read(reinterpret_cast<char*>(&v), sizeof v);
    if (!is) throw std::runtime_error("snapshot truncated");
    return v;
}

std::uint8_t get_u8(std::istream& is) {
    std::uint8_t v = 0;
    is.read(reinterpret_cast<char*>(&v), sizeof v);
    if (!is) throw std::runtime_error("snapshot truncated");
    return v;
}

Matrix get_matrix(std::istream& is) {
    const auto rows = static_cast<Index>(get_u64(is));
    const auto cols = static_cast<Index>(get_u64(is));
    Matrix m(rows, cols);
    is.read(reinterpret_cast<char*>(m.data()),
            static_cast<std::streamsize>(sizeof(double) * m.size()));
    if (!is) throw std::runtime_error("snapshot truncated");
    return m;
}

}  // namespace

void BlsNetwork::save(const std::string& path) const {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
    os.write(kMagic, sizeof kMagic);
    put_u64(os, config_.seed);
    put_f64(os, config_.lambda);
    put_u8(os, static_cast<std::uint8_t>(config_.solver));
    put_u8(os, static_cast<std::uint8_t>(config_.featureActivation));
    put_u8(os, static_cast<std::uint8_t>(config_.enhancementActivation));
    put_f64(os, config_.enhancementScale);

    put_u64(os, featureGroups_.size());
    for (const auto& g : featureGroups_) {
        put_matrix(os, g.We);
        put_matrix(os, g.beta);
        put_u8(os, static_cast<std::uint8_t>(g.activation));
    }
    put_u64(os, enhancementGroups_.size());
    for (const auto& g : enhancementGroups_) {
        put_matrix(os, g.Wh);
        put_matrix(os, g.beta);
        put_u8(os, static_cast<std::uint8_t>(g.activation));
        put_f64(os, g.scale);
        put_u64(os, static_cast<std::uint64_t>(g.featOffset));
    }
    put_u64(os, static_cast<std::uint64_t>(allFeatureEnhGroups_));
    put_u64(os, segments_.size());
    for (const auto& s : segments_) {
        put_u8(os, static_cast<std::uint8_t>(s.kind));
        put_u64(os, s.index);
    }
    put_matrix(os, weights_);
    if (!os) throw std::runtime_error("write failed for '" + path + "'");
}

BlsNetwork BlsNetwork::load(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open '" + path + "'");
    char magic[8];
    is.read(magic, sizeof magic);
    if (!is || std::memcmp(magic, kMagic, sizeof kMagic) != 0) {
        throw std::runtime_error("'" + path + "' is not a network snapshot");
    }
    BlsNetwork net;
    net.config_.seed = get_u64(is);
    net.config_.lambda = get_f64(is);
    net.config_.solver = static_cast<SolverKind>(get_u8(is));
    net.config_.featureActivation = static_cast<Activation>(get_u8(is));
    net.config_.enhancementActivation = static_cast<Activation>(get_u8(is));
    net.config_.enhancementScale = get_f64(is);

    const auto nf = get_u64(is);
    for (std::uint64_t i = 0; i < nf; ++i) {
        FeatureGroup g;
        g.We = get_matrix(is);
        g.beta = get_matrix(is);
        g.activation = static_cast<Activation>(get_u8(is));
        net.featureGroups_.push_back(std::move(g));
    }
    const auto ne = get_u64(is);
    for (std::uint64_t i = 0; i < ne; ++i) {
        EnhancementGroup g;
        g.Wh = get_matrix(is);
        g.beta = get_matrix(is);
        g.activation = static_cast<Activation>(get_u8(is));
        g.scale = get_f64(is);
        g.featOffset = static_cast<Index>(get_u64(is));
        net.enhancementGroups_.push_back(std::move(g));
    }
    net.allFeatureEnhGroups_ = static_cast<Index>(get_u64(is));
    const auto ns = get_u64(is);
    for (std::uint64_t i = 0; i < ns; ++i) {
        Segment s;
        s.kind = static_cast<Segment::Kind>(get_u8(is));
        s.index = static_cast<std::uint32_t>(get_u64(is));
        net.segments_.push_back(s);
    }
    net.weights_ = get_matrix(is);
    return net;
}

}  // namespace bls
