#pragma once

#include "bls/matrix.hpp"
#include "bls/rng.hpp"
#include "bls/solvers.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace bls {

enum class Activation { Linear, Tansig, Sigmoid };

const char* to_string(Activation a);
Activation activation_from_string(std::string_view name);

// Applies the activation entrywise. tansig(x) = 2/(1 + exp(-2x)) - 1.
Matrix apply_activation(Activation a, Matrix m);

// Random projection of the raw input: Z = act(X*We + beta).
struct FeatureGroup {
    Matrix We;    // d x f
    Matrix beta;  // 1 x f, broadcast over rows
    Activation activation = Activation::Linear;

    Index size() const { return We.cols(); }
    Matrix map(const Matrix& x) const;
};

// Random nonlinear projection of a span of feature columns:
// H = act(scale*(Z_span*Wh + beta)). featOffset selects the first feature
// column read; Wh.rows() is the span width. Groups created over "all
// features" have offset 0 and span the feature columns that existed at
// creation time.
struct EnhancementGroup {
    Matrix Wh;    // span x e
    Matrix beta;  // 1 x e
    Activation activation = Activation::Tansig;
    double scale = 0.8;
    Index featOffset = 0;

    Index size() const { return Wh.cols(); }
    Matrix map(const Matrix& allFeatureCols) const;
};

// Optional fine-tuning hook for freshly drawn feature weights. Receives the
// raw input and the untuned weights, returns the weights to use. The
// default (no hook) keeps the random draw untouched so solver comparisons
// are not entangled with preprocessing.
using FeatureTuner = std::function<Matrix(const Matrix& x, const Matrix& we, const Matrix& beta)>;

// Linear sparse-autoencoder tuner: a few iterations of ISTA on
// min ||Z0*T - X||_F^2 + shrink*||T||_1, returning T'.
FeatureTuner make_sparse_autoencoder_tuner(int iterations = 20, double shrink = 1e-3);

struct NetworkConfig {
    SolverKind solver = SolverKind::CholStable;
    double lambda = 1e-8;
    std::uint64_t seed = 1;
    Activation featureActivation = Activation::Linear;
    Activation enhancementActivation = Activation::Tansig;
    double enhancementScale = 0.8;
    FeatureTuner tuner;  // empty = no fine-tuning
};

struct AddResult {
    Index addedColumns = 0;
    double solverSeconds = 0.0;  // median over timing reps, update call only
    double stepSeconds = 0.0;    // node generation + solver update
};

// Flat network of random feature and enhancement node groups whose only
// trained parameters are the output weights, maintained incrementally by
// the attached solver. Node columns are appended to the expanded input in
// insertion order, so the accumulated solver matrix can be reproduced
// exactly from the stored groups (assemble()).
class BlsNetwork {
public:
    static BlsNetwork build_initial(const Matrix& x, const Matrix& y, Index nGroups,
                                    Index fPerGroup, Index mGroups, Index ePerGroup,
                                    const NetworkConfig& config, int timingReps = 1);

    // Inserts one new enhancement group over all current feature columns
    // and updates the solver with its output.
    AddResult add_enhancement_nodes(Index count, const Matrix& y, int timingReps = 1);

    // Inserts a feature group plus its corresponding enhancement nodes
    // (correspondingEnh total, split evenly over the existing all-feature
    // enhancement groups, each extension reading only the new feature
    // columns) and optionally extraEnh additional enhancement nodes over
    // all feature columns. One solver update with the concatenated block.
    AddResult add_feature_nodes(Index fCount, Index correspondingEnh, Index extraEnh,
                                const Matrix& y, int timingReps = 1);

    Matrix predict(const Matrix& x) const;
    std::vector<int> classify(const Matrix& x) const;

    // Rebuilds the expanded input for arbitrary inputs, column-for-column
    // in solver insertion order.
    Matrix assemble(const Matrix& x) const;

    const Matrix& weights() const { return weights_; }
    const OutputSolver& solver() const;
    bool trainable() const { return solver_ != nullptr; }

    Index featureColumns() const;
    Index enhancementColumns() const;
    Index totalColumns() const { return featureColumns() + enhancementColumns(); }
    double lambda() const { return config_.lambda; }
    const NetworkConfig& config() const { return config_; }
    double initSolverSeconds() const { return initSolverSeconds_; }

    const std::vector<FeatureGroup>& featureGroups() const { return featureGroups_; }
    const std::vector<EnhancementGroup>& enhancementGroups() const { return enhancementGroups_; }

    // Lossless binary snapshot (seed, lambda, solver kind, group weights,
    // layout, output weights). A loaded network predicts and classifies;
    // it does not carry the dense solver state needed to keep training.
    void save(const std::string& path) const;
    static BlsNetwork load(const std::string& path);

private:
    BlsNetwork() = default;

    struct Segment {
        enum class Kind : std::uint8_t { Feature, Enhancement };
        Kind kind;
        std::uint32_t index;
    };

    FeatureGroup draw_feature_group(Index fCount);
    EnhancementGroup draw_enhancement_group(Index eCount, Index featOffset, Index span);
    Matrix feature_block(const Matrix& x) const;  // all feature groups, concatenated
    void refresh_weights();

    NetworkConfig config_;
    std::unique_ptr<UniformRng> rng_;
    std::unique_ptr<OutputSolver> solver_;
    std::vector<FeatureGroup> featureGroups_;
    std::vector<EnhancementGroup> enhancementGroups_;
    std::vector<Segment> segments_;
    Index allFeatureEnhGroups_ = 0;  // count of groups spanning all features
    Matrix trainX_;
    Matrix trainZ_;  // cached feature block on trainX_
    Matrix weights_;
    double initSolverSeconds_ = 0.0;
};

}  // namespace bls
