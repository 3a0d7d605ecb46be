#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "corrcipher/errors.hpp"
#include "corrcipher/source_model.hpp"

namespace corrcipher {

/// Rounds a (real) bit budget up to an integer number of bits, with a guard
/// so that values an epsilon below an integer do not ceil past it.
int ceil_bits(double bits);

/// Rate targets for the four random-binning maps, in bits for the whole
/// block. Derived moduli are 2^ceil_bits(target).
struct CodebookConfig {
    int K = 0;
    double log_m_x = 0.0;
    double log_m_y = 0.0;
    double log_m_cx = 0.0;
    double log_m_cy = 0.0;
    double epsilon0 = 0.0;       // slack in bits/symbol; shortfall is warn-only
    std::uint64_t seed = 0;
};

/// The quadruple of bin indices produced by one encoding: private bins w_x,
/// w_y and common bins w_cx, w_cy, each with its modulus.
struct PrototypeCodeword {
    std::uint64_t w_x = 0, w_y = 0, w_cx = 0, w_cy = 0;
    std::uint64_t m_x = 1, m_y = 1, m_cx = 1, m_cy = 1;
};

/// Result of splitting an index into a low part (mod m1) and high part.
struct SplitCodeword {
    std::uint64_t w1 = 0;
    std::uint64_t w2 = 0;
    std::uint64_t m1 = 1;
    std::uint64_t m2 = 1;
};

/// Four seeded bin-assignment maps over length-K sequences, plus the joint
/// maximum-probability decoder. Maps are uniform hashes reduced mod M, except
/// that a map whose requested rate reaches full rate (K log2 |A|) becomes the
/// lexicographic-rank injection, so full-rate codebooks are exactly lossless.
/// Immutable after build; reconstructible from (source, config).
class BinningCodebook {
  public:
    BinningCodebook(const JointSource& src, const CodebookConfig& cfg);

    const CodebookConfig& config() const { return cfg_; }
    int K() const { return cfg_.K; }
    int alphabet_x() const { return ax_; }
    int alphabet_y() const { return ay_; }
    std::uint64_t m_x() const { return m_x_; }
    std::uint64_t m_y() const { return m_y_; }
    std::uint64_t m_cx() const { return m_cx_; }
    std::uint64_t m_cy() const { return m_cy_; }

    /// Non-fatal diagnostics collected at build time (rate below the epsilon0
    /// slack, bins loaded beyond 3 sigma of the binomial model, ...).
    const std::vector<std::string>& warnings() const { return warnings_; }

    // Bin values by lexicographic sequence rank; used by the oracle to
    // enumerate codewords without materializing sequences.
    std::uint64_t f_x_at(std::uint64_t x_rank) const { return f_x_[x_rank]; }
    std::uint64_t f_cx_at(std::uint64_t x_rank) const { return f_cx_[x_rank]; }
    std::uint64_t f_y_at(std::uint64_t y_rank) const { return f_y_[y_rank]; }
    std::uint64_t f_cy_at(std::uint64_t y_rank) const { return f_cy_[y_rank]; }

    std::uint64_t num_x_sequences() const { return f_x_.size(); }
    std::uint64_t num_y_sequences() const { return f_y_.size(); }

    /// log2 joint probability of a pair given by sequence ranks, computed
    /// from the canonical per-cell count signature so that pairs with equal
    /// probability compare exactly equal.
    double pair_log2_prob(std::uint64_t x_rank, std::uint64_t y_rank) const;

  private:
    friend PrototypeCodeword encode(const BinningCodebook&, const SequencePair&);
    friend SequencePair decode(const BinningCodebook&, const PrototypeCodeword&);

    CodebookConfig cfg_;
    int ax_ = 0, ay_ = 0;
    std::uint64_t m_x_ = 1, m_y_ = 1, m_cx_ = 1, m_cy_ = 1;
    std::vector<std::uint32_t> f_x_, f_cx_, f_y_, f_cy_;
    // (w * m_c + wc, rank) sorted; decode candidates come from equal ranges.
    std::vector<std::pair<std::uint64_t, std::uint32_t>> x_buckets_, y_buckets_;
    Eigen::MatrixXd log2_cell_;
    std::vector<std::string> warnings_;
};

PrototypeCodeword encode(const BinningCodebook& cb, const SequencePair& pair);

/// Among all pairs whose four bin indices equal the codeword, returns the one
/// maximizing joint probability; ties break to the lexicographically first
/// (x, y). Throws NoConsistentPair when no positive-probability pair matches.
SequencePair decode(const BinningCodebook& cb, const PrototypeCodeword& cw);

SplitCodeword split(std::uint64_t w, std::uint64_t m, std::uint64_t m1);
std::uint64_t unsplit(const SplitCodeword& sc);

// Lexicographic rank/unrank of sequences over an alphabet of given size.
std::uint64_t sequence_rank(const std::vector<int>& seq, int alphabet);
std::vector<int> sequence_unrank(std::uint64_t rank, int K, int alphabet);

/// Enumeration budget shared by the decoder and the oracle: the joint
/// sequence space must stay within 26 bits so exhaustive search stays exact
/// and fast.
constexpr double kEnumerationCapBits = 26.0;

} // namespace corrcipher
