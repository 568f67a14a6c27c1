#include "bls/dataset.hpp"

#include "bls/rng.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace bls {

namespace {

Matrix one_hot(const std::vector<int>& labels, Index classes) {
    Matrix y = Matrix::Zero(static_cast<Index>(labels.size()), classes);
    for (std::size_t i = 0; i < labels.size(); ++i) y(static_cast<Index>(i), labels[i]) = 1.0;
    return y;
}

// Min-max scale each column to [0,1]; constant columns map to zero.
void scale_unit_interval(Matrix& x) {
    for (Index j = 0; j < x.cols(); ++j) {
        const double lo = x.col(j).minCoeff();
        const double hi = x.col(j).maxCoeff();
        if (hi > lo) {
            x.col(j) = (x.col(j).array() - lo) / (hi - lo);
        } else {
            x.col(j).setZero();
        }
    }
}

std::uint32_t read_be32(std::istream& is, const std::string& path) {
    unsigned char b[4];
    is.read(reinterpret_cast<char*>(b), 4);
    if (!is) throw std::runtime_error("idx file truncated: " + path);
    return (std::uint32_t(b[0]) << 24) | (std::uint32_t(b[1]) << 16) | (std::uint32_t(b[2]) << 8) |
           std::uint32_t(b[3]);
}

}  // namespace

Dataset Dataset::head(Index n) const {
    if (n > samples()) n = samples();
    Dataset out;
    out.X = X.topRows(n);
    out.Y = Y.topRows(n);
    out.labels.assign(labels.begin(), labels.begin() + n);
    return out;
}

Dataset load_idx(const std::string& imagesPath, const std::string& labelsPath) {
    std::ifstream img(imagesPath, std::ios::binary);
    if (!img) throw std::runtime_error("cannot open idx images file: " + imagesPath);
    std::ifstream lbl(labelsPath, std::ios::binary);
    if (!lbl) throw std::runtime_error("cannot open idx labels file: " + labelsPath);

    const std::uint32_t imgMagic = read_be32(img, imagesPath);
    if (imgMagic != 0x00000803u) {
        std::ostringstream os;
        os << "bad idx magic in " << imagesPath << ": expected 0x00000803, got 0x" << std::hex
           << imgMagic;
        throw std::runtime_error(os.str());
    }
    const std::uint32_t lblMagic = read_be32(lbl, labelsPath);
    if (lblMagic != 0x00000801u) {
        std::ostringstream os;
        os << "bad idx magic in " << labelsPath << ": expected 0x00000801, got 0x" << std::hex
           << lblMagic;
        throw std::runtime_error(os.str());
    }

    const std::uint32_t nImages = read_be32(img, imagesPath);
    const std::uint32_t rows = read_be32(img, imagesPath);
    const std::uint32_t cols = read_be32(img, imagesPath);
    const std::uint32_t nLabels = read_be32(lbl, labelsPath);
    if (nImages != nLabels) {
        throw std::runtime_error("idx count mismatch: " + imagesPath + " has " +
                                 std::to_string(nImages) + " images but " + labelsPath + " has " +
                                 std::to_string(nLabels) + " labels");
    }

    const Index l = static_cast<Index>(nImages);
    const Index d = static_cast<Index>(rows) * static_cast<Index>(cols);
    std::vector<unsigned char> pixels(static_cast<std::size_t>(l * d));
    img.read(reinterpret_cast<char*>(pixels.data()), static_cast<std::streamsize>(pixels.size()));
    if (!img || img.gcount() != static_cast<std::streamsize>(pixels.size())) {
        throw std::runtime_error("idx file truncated: " + imagesPath);
    }
    std::vector<unsigned char> bytes(static_cast<std::size_t>(l));
    lbl.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!lbl || lbl.gcount() != static_cast<std::streamsize>(bytes.size())) {
        throw std::runtime_error("idx file truncated: " + labelsPath);
    }

    Dataset ds;
    ds.X.resize(l, d);
    for (Index i = 0; i < l; ++i)
        for (Index j = 0; j < d; ++j)
            ds.X(i, j) = static_cast<double>(pixels[static_cast<std::size_t>(i * d + j)]) / 255.0;
    ds.labels.resize(static_cast<std::size_t>(l));
    for (Index i = 0; i < l; ++i) {
        const int v = bytes[static_cast<std::size_t>(i)];
        if (v > 9) {
            throw std::runtime_error("idx label out of range at row " + std::to_string(i) + ": " +
                                     std::to_string(v));
        }
        ds.labels[static_cast<std::size_t>(i)] = v;
    }
    ds.Y = one_hot(ds.labels, 10);
    return ds;
}

Dataset synth_blobs(std::uint64_t seed, Index l, Index d, Index c, double separation) {
    if (l < 1 || d < 1 || c < 1) throw std::invalid_argument("synth_blobs: counts must be >= 1");
    if (c > l) throw std::invalid_argument("synth_blobs: more classes than samples");
    if (separation < 0.0) throw std::invalid_argument("synth_blobs: separation must be >= 0");

    UniformRng rng(seed);
    Matrix centers = separation * rng.gaussian_matrix(c, d);
    Dataset ds;
    ds.X.resize(l, d);
    ds.labels.resize(static_cast<std::size_t>(l));
    for (Index i = 0; i < l; ++i) {
        const int label = static_cast<int>(i % c);
        ds.labels[static_cast<std::size_t>(i)] = label;
        for (Index j = 0; j < d; ++j) ds.X(i, j) = centers(label, j) + rng.gaussian();
    }
    scale_unit_interval(ds.X);
    ds.Y = one_hot(ds.labels, c);
    return ds;
}

Dataset load_csv(const std::string& path, int labelColumn, bool hasHeader) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open csv file: " + path);

    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t lineNo = 0;
    bool skippedHeader = !hasHeader;
    while (std::getline(is, line)) {
        ++lineNo;
        if (line.empty()) continue;
        if (!skippedHeader) {
            skippedHeader = true;
            continue;
        }
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            std::size_t used = 0;
            double v = 0.0;
            try {
                v = std::stod(cell, &used);
            } catch (const std::exception&) {
                throw std::runtime_error("csv: non-numeric cell '" + cell + "' at line " +
                                         std::to_string(lineNo));
            }
            while (used < cell.size() && std::isspace(static_cast<unsigned char>(cell[used])))
                ++used;
            if (used != cell.size()) {
                throw std::runtime_error("csv: non-numeric cell '" + cell + "' at line " +
                                         std::to_string(lineNo));
            }
            row.push_back(v);
        }
        if (!rows.empty() && row.size() != rows.front().size()) {
            throw std::runtime_error("csv: ragged row at line " + std::to_string(lineNo) + " (" +
                                     std::to_string(row.size()) + " cells, expected " +
                                     std::to_string(rows.front().size()) + ")");
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw std::runtime_error("csv: no data rows in " + path);

    const int width = static_cast<int>(rows.front().size());
    int lc = labelColumn < 0 ? width + labelColumn : labelColumn;
    if (lc < 0 || lc >= width) {
        throw std::invalid_argument("csv: label column " + std::to_string(labelColumn) +
                                    " out of range for " + std::to_string(width) + " columns");
    }

    Dataset ds;
    const Index l = static_cast<Index>(rows.size());
    const Index d = width - 1;
    ds.X.resize(l, d);
    ds.labels.resize(static_cast<std::size_t>(l));
    std::vector<double> seen;  // label values in first-appearance order
    for (Index i = 0; i < l; ++i) {
        const auto& row = rows[static_cast<std::size_t>(i)];
        Index at = 0;
        for (int j = 0; j < width; ++j) {
            if (j == lc) continue;
            ds.X(i, at++) = row[static_cast<std::size_t>(j)];
        }
        const double raw = row[static_cast<std::size_t>(lc)];
        int id = -1;
        for (std::size_t s = 0; s < seen.size(); ++s) {
            if (seen[s] == raw) {
                id = static_cast<int>(s);
                break;
            }
        }
        if (id < 0) {
            id = static_cast<int>(seen.size());
            seen.push_back(raw);
        }
        ds.labels[static_cast<std::size_t>(i)] = id;
    }
    scale_unit_interval(ds.X);
    ds.Y = one_hot(ds.labels, static_cast<Index>(seen.size()));
    return ds;
}

std::string data_dir() {
    if (const char* env = std::getenv("BLS_DATA_DIR")) return env;
    return "data";
}

}  // namespace bls
