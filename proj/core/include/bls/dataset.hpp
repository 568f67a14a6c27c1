#pragma once

#include "bls/matrix.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace bls {

// Supervised dataset: inputs scaled to [0,1], one-hot targets, and the
// integer labels they encode.
struct Dataset {
    Matrix X;                 // l x d
    Matrix Y;                 // l x c, one-hot rows
    std::vector<int> labels;  // length l

    Index samples() const { return X.rows(); }
    Index features() const { return X.cols(); }
    Index classes() const { return Y.cols(); }

    Dataset head(Index n) const;  // first n samples
};

// IDX image/label pair (big-endian magic 0x00000803 / 0x00000801,
// big-endian dims, unsigned byte pixels scaled by 1/255, one-hot c = 10).
// Bad magic, truncation and image/label count mismatch raise distinct
// errors.
Dataset load_idx(const std::string& imagesPath, const std::string& labelsPath);

// c Gaussian blobs in d dimensions, deterministic for the seed. Class
// centers are `separation` standard deviations apart in expectation;
// separation = 0 collapses every class onto the same distribution.
// Inputs are min-max scaled to [0,1] afterwards; labels interleave
// (sample i belongs to class i mod c).
Dataset synth_blobs(std::uint64_t seed, Index l, Index d, Index c, double separation);

// Rectangular numeric CSV. labelColumn selects the class column (negative
// counts from the end); features are min-max scaled to [0,1] with constant
// columns mapped to zero; labels are densified to 0..c-1 in first-appearance
// order. Ragged rows and non-numeric cells raise errors.
Dataset load_csv(const std::string& path, int labelColumn, bool hasHeader = false);

// Dataset cache root: $BLS_DATA_DIR if set, otherwise "data".
std::string data_dir();

}  // namespace bls
