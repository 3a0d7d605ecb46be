#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "corrcipher/errors.hpp"

namespace corrcipher {

/// Entropy in bits of a discrete distribution given as any Eigen expression.
/// Zero entries are skipped; negative entries are the caller's problem.
template <class Derived>
double entropy_bits(const Eigen::MatrixBase<Derived>& p) {
    double h = 0.0;
    for (Eigen::Index j = 0; j < p.cols(); ++j) {
        for (Eigen::Index i = 0; i < p.rows(); ++i) {
            const double v = p(i, j);
            if (v > 0.0) h -= v * std::log2(v);
        }
    }
    return h;
}

/// Finite-alphabet pair of correlated memoryless sources, defined entirely by
/// the joint pmf p(x, y). Rows index the X alphabet, columns the Y alphabet.
/// Immutable after construction; single source of truth for all entropies.
class JointSource {
  public:
    const Eigen::MatrixXd& pmf() const { return pmf_; }
    int alphabet_x() const { return static_cast<int>(pmf_.rows()); }
    int alphabet_y() const { return static_cast<int>(pmf_.cols()); }

    Eigen::VectorXd marginal_x() const { return pmf_.rowwise().sum(); }
    Eigen::VectorXd marginal_y() const { return pmf_.colwise().sum().transpose(); }

    /// Indices of the input rows/columns that were dropped because their
    /// marginal probability was zero.
    const std::vector<int>& pruned_x_symbols() const { return pruned_x_; }
    const std::vector<int>& pruned_y_symbols() const { return pruned_y_; }

  private:
    friend JointSource build_source(const Eigen::MatrixXd& pmf_entries);
    JointSource() = default;

    Eigen::MatrixXd pmf_;
    std::vector<int> pruned_x_, pruned_y_;
};

/// All six information measures of a JointSource, in bits per symbol.
struct SourceStats {
    double h_x = 0.0;
    double h_y = 0.0;
    double h_x_given_y = 0.0;
    double h_y_given_x = 0.0;
    double h_xy = 0.0;
    double i_xy = 0.0;
};

/// A length-K realization of the pair, with the K = K1 + K2 split that marks
/// the trailing K2 positions as the block exposed to the wiretapper.
struct SequencePair {
    std::vector<int> x_seq;
    std::vector<int> y_seq;
    int k1 = 0;
    int k2 = 0;

    int length() const { return static_cast<int>(x_seq.size()); }
};

/// Per-symbol common and private information content of the leaked block:
/// the trailing K2 symbols of Y carry their proportional share of I(X;Y)
/// and H(Y|X).
struct MuComponents {
    double mu_c = 0.0;
    double mu_y = 0.0;
};

/// Validates and normalizes a raw pmf matrix. Rows/columns whose marginal is
/// exactly zero are pruned (and recorded) so downstream enumeration never
/// meets a zero-probability symbol.
JointSource build_source(const Eigen::MatrixXd& pmf_entries);

SourceStats entropies(const JointSource& src);

/// K i.i.d. draws from the joint pmf. Identical (src, K, seed) arguments give
/// identical output. The returned pair carries k1 = K, k2 = 0; use
/// with_leaked_suffix to mark a trailing block as wiretapped.
SequencePair sample_pair(const JointSource& src, int K, std::uint64_t seed);

/// Re-labels the split point of an existing pair: the last k2 symbols become
/// the leaked block.
SequencePair with_leaked_suffix(SequencePair pair, int k2);

MuComponents mu_components(const SourceStats& stats, int K, int K2);

/// Convenience: the doubly symmetric binary source with disagreement
/// probability p (uniform marginals).
JointSource dsbs(double p);

} // namespace corrcipher
