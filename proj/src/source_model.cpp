#include "corrcipher/source_model.hpp"

#include <cmath>
#include <string>

#include "corrcipher/rng.hpp"

namespace corrcipher {

JointSource build_source(const Eigen::MatrixXd& pmf_entries) {
    if (pmf_entries.rows() < 1 || pmf_entries.cols() < 1) {
        throw NotNormalized("build_source: empty pmf matrix");
    }
    for (Eigen::Index i = 0; i < pmf_entries.rows(); ++i) {
        for (Eigen::Index j = 0; j < pmf_entries.cols(); ++j) {
            if (pmf_entries(i, j) < 0.0) {
                throw NegativeProbability("build_source: negative entry at (" +
                                          std::to_string(i) + "," + std::to_string(j) + ")");
            }
        }
    }
    const double total = pmf_entries.sum();
    if (std::abs(total - 1.0) > 1e-9) {
        throw NotNormalized("build_source: pmf sums to " + std::to_string(total));
    }

    JointSource src;
    std::vector<int> keep_x, keep_y;
    const Eigen::VectorXd row_sum = pmf_entries.rowwise().sum();
    const Eigen::VectorXd col_sum = pmf_entries.colwise().sum().transpose();
    for (int i = 0; i < pmf_entries.rows(); ++i) {
        if (row_sum(i) > 0.0) keep_x.push_back(i);
        else src.pruned_x_.push_back(i);
    }
    for (int j = 0; j < pmf_entries.cols(); ++j) {
        if (col_sum(j) > 0.0) keep_y.push_back(j);
        else src.pruned_y_.push_back(j);
    }
    if (keep_x.size() < 2 || keep_y.size() < 2) {
        throw NotNormalized("build_source: alphabets need at least two symbols with positive marginal");
    }

    src.pmf_.resize(static_cast<Eigen::Index>(keep_x.size()),
                    static_cast<Eigen::Index>(keep_y.size()));
    for (std::size_t a = 0; a < keep_x.size(); ++a) {
        for (std::size_t b = 0; b < keep_y.size(); ++b) {
            src.pmf_(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
                pmf_entries(keep_x[a], keep_y[b]);
        }
    }
    return src;
}

SourceStats entropies(const JointSource& src) {
    const Eigen::MatrixXd& p = src.pmf();
    SourceStats s;
    s.h_x = entropy_bits(src.marginal_x());
    s.h_y = entropy_bits(src.marginal_y());
    s.h_xy = entropy_bits(p);
    s.h_x_given_y = s.h_xy - s.h_y;
    s.h_y_given_x = s.h_xy - s.h_x;
    s.i_xy = s.h_x + s.h_y - s.h_xy;
    return s;
}

SequencePair sample_pair(const JointSource& src, int K, std::uint64_t seed) {
    const Eigen::MatrixXd& p = src.pmf();
    const int ny = src.alphabet_y();

    // Flattened CDF in row-major cell order; inversion keeps sampling exact
    // and portable.
    std::vector<double> cdf;
    cdf.reserve(static_cast<std::size_t>(p.size()));
    double acc = 0.0;
    for (int i = 0; i < src.alphabet_x(); ++i) {
        for (int j = 0; j < ny; ++j) {
            acc += p(i, j);
            cdf.push_back(acc);
        }
    }
    cdf.back() = 1.0;

    Rng rng(mix_seed(seed, 0x736f757263ULL));
    SequencePair pair;
    pair.x_seq.resize(K);
    pair.y_seq.resize(K);
    pair.k1 = K;
    pair.k2 = 0;
    for (int t = 0; t < K; ++t) {
        const double u = rng.next_unit();
        std::size_t cell = 0;
        while (cell + 1 < cdf.size() && u >= cdf[cell]) ++cell;
        pair.x_seq[t] = static_cast<int>(cell) / ny;
        pair.y_seq[t] = static_cast<int>(cell) % ny;
    }
    return pair;
}

SequencePair with_leaked_suffix(SequencePair pair, int k2) {
    const int K = pair.length();
    if (k2 < 0 || k2 > K) {
        throw OutOfRange("with_leaked_suffix: k2 outside [0, K]");
    }
    pair.k2 = k2;
    pair.k1 = K - k2;
    return pair;
}

MuComponents mu_components(const SourceStats& stats, int K, int K2) {
    if (K < 1 || K2 < 0 || K2 > K) {
        throw OutOfRange("mu_components: need 0 <= K2 <= K, K >= 1");
    }
    const double frac = static_cast<double>(K2) / static_cast<double>(K);
    return MuComponents{frac * stats.i_xy, frac * stats.h_y_given_x};
}

JointSource dsbs(double p) {
    Eigen::MatrixXd m(2, 2);
    m << (1.0 - p) / 2.0, p / 2.0,
         p / 2.0, (1.0 - p) / 2.0;
    return build_source(m);
}

} // namespace corrcipher
