#include "corrcipher/sw_codec.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "corrcipher/rng.hpp"

namespace corrcipher {

namespace {

constexpr double kEps = 1e-9;

std::uint64_t pow_u64(std::uint64_t base, int exp) {
    std::uint64_t r = 1;
    for (int i = 0; i < exp; ++i) r *= base;
    return r;
}

// Seeded hash of (tag, sequence digits); low bits are taken mod the
// power-of-two modulus.
std::uint32_t hash_bin(std::uint64_t tag, std::uint64_t seed, std::uint64_t rank,
                       std::uint64_t modulus) {
    std::uint64_t h = mix_seed(mix_seed(seed, tag), rank);
    h = mix_seed(h, rank ^ 0x5bd1e995ULL);
    return static_cast<std::uint32_t>(h % modulus);
}

void fill_map(std::vector<std::uint32_t>& f, std::uint64_t n_seq, std::uint64_t modulus,
              bool injective, std::uint64_t tag, std::uint64_t seed) {
    f.resize(n_seq);
    for (std::uint64_t r = 0; r < n_seq; ++r) {
        f[r] = injective ? static_cast<std::uint32_t>(r) : hash_bin(tag, seed, r, modulus);
    }
}

void check_balance(const std::vector<std::uint32_t>& f, std::uint64_t modulus,
                   const char* name, std::vector<std::string>& warnings) {
    if (modulus <= 1) return;
    std::vector<std::uint64_t> load(modulus, 0);
    for (std::uint32_t b : f) ++load[b];
    const double n = static_cast<double>(f.size());
    const double p = 1.0 / static_cast<double>(modulus);
    const double mean = n * p;
    const double sigma = std::sqrt(n * p * (1.0 - p));
    for (std::uint64_t b = 0; b < modulus; ++b) {
        if (std::abs(static_cast<double>(load[b]) - mean) > 3.0 * sigma + kEps) {
            warnings.push_back(std::string(name) + ": bin " + std::to_string(b) +
                               " load " + std::to_string(load[b]) +
                               " beyond 3 sigma of binomial expectation");
        }
    }
}

} // namespace

int ceil_bits(double bits) {
    if (bits <= 0.0) return 0;
    return static_cast<int>(std::ceil(bits - kEps));
}

std::uint64_t sequence_rank(const std::vector<int>& seq, int alphabet) {
    std::uint64_t r = 0;
    for (int s : seq) r = r * static_cast<std::uint64_t>(alphabet) + static_cast<std::uint64_t>(s);
    return r;
}

std::vector<int> sequence_unrank(std::uint64_t rank, int K, int alphabet) {
    std::vector<int> seq(K);
    for (int i = K - 1; i >= 0; --i) {
        seq[i] = static_cast<int>(rank % static_cast<std::uint64_t>(alphabet));
        rank /= static_cast<std::uint64_t>(alphabet);
    }
    return seq;
}

BinningCodebook::BinningCodebook(const JointSource& src, const CodebookConfig& cfg)
    : cfg_(cfg), ax_(src.alphabet_x()), ay_(src.alphabet_y()) {
    if (cfg.K < 1) throw LengthMismatch("build_codebook: K must be >= 1");
    if (cfg.log_m_x < 0 || cfg.log_m_y < 0 || cfg.log_m_cx < 0 || cfg.log_m_cy < 0) {
        throw RateBelowSlepianWolf("build_codebook: negative rate target");
    }
    const double joint_bits =
        cfg.K * (std::log2(static_cast<double>(ax_)) + std::log2(static_cast<double>(ay_)));
    if (joint_bits > kEnumerationCapBits + kEps) {
        throw EnumerationTooLarge("build_codebook: K log2(|X||Y|) = " + std::to_string(joint_bits) +
                                  " exceeds the exhaustive-decoding cap of 26 bits");
    }

    const SourceStats st = entropies(src);
    const double K = cfg.K;
    // Hard floor: the Slepian-Wolf corner itself. The epsilon0 slack above it
    // is advisory.
    if (cfg.log_m_x < K * st.h_x_given_y - kEps) {
        throw RateBelowSlepianWolf("build_codebook: log_m_x below K*H(X|Y)");
    }
    if (cfg.log_m_y < K * st.h_y_given_x - kEps) {
        throw RateBelowSlepianWolf("build_codebook: log_m_y below K*H(Y|X)");
    }
    if (cfg.log_m_cx + cfg.log_m_cy < K * st.i_xy - kEps) {
        throw RateBelowSlepianWolf("build_codebook: common rate below K*I(X;Y)");
    }
    if (cfg.log_m_x < K * (st.h_x_given_y + cfg.epsilon0) - kEps ||
        cfg.log_m_y < K * (st.h_y_given_x + cfg.epsilon0) - kEps ||
        cfg.log_m_cx + cfg.log_m_cy < K * (st.i_xy + cfg.epsilon0) - kEps) {
        warnings_.push_back("rates are above the Slepian-Wolf corner but inside the epsilon0 slack");
    }

    m_x_ = 1ULL << ceil_bits(cfg.log_m_x);
    m_y_ = 1ULL << ceil_bits(cfg.log_m_y);
    m_cx_ = 1ULL << ceil_bits(cfg.log_m_cx);
    m_cy_ = 1ULL << ceil_bits(cfg.log_m_cy);

    const std::uint64_t nx = pow_u64(static_cast<std::uint64_t>(ax_), cfg.K);
    const std::uint64_t ny = pow_u64(static_cast<std::uint64_t>(ay_), cfg.K);
    const double full_x = K * std::log2(static_cast<double>(ax_));
    const double full_y = K * std::log2(static_cast<double>(ay_));

    // A map switches to the rank injection only when its *requested* rate is
    // full; a power-of-two ceiling that happens to reach |A|^K stays a hash.
    fill_map(f_x_, nx, m_x_, cfg.log_m_x >= full_x - kEps, 0x5158ULL, cfg.seed);
    fill_map(f_cx_, nx, m_cx_, cfg.log_m_cx >= full_x - kEps, 0x4358ULL, cfg.seed);
    fill_map(f_y_, ny, m_y_, cfg.log_m_y >= full_y - kEps, 0x5159ULL, cfg.seed);
    fill_map(f_cy_, ny, m_cy_, cfg.log_m_cy >= full_y - kEps, 0x4359ULL, cfg.seed);

    check_balance(f_x_, m_x_, "f_x", warnings_);
    check_balance(f_cx_, m_cx_, "f_cx", warnings_);
    check_balance(f_y_, m_y_, "f_y", warnings_);
    check_balance(f_cy_, m_cy_, "f_cy", warnings_);

    x_buckets_.reserve(nx);
    for (std::uint64_t r = 0; r < nx; ++r) {
        x_buckets_.emplace_back(static_cast<std::uint64_t>(f_x_[r]) * m_cx_ + f_cx_[r],
                                static_cast<std::uint32_t>(r));
    }
    std::sort(x_buckets_.begin(), x_buckets_.end());
    y_buckets_.reserve(ny);
    for (std::uint64_t r = 0; r < ny; ++r) {
        y_buckets_.emplace_back(static_cast<std::uint64_t>(f_y_[r]) * m_cy_ + f_cy_[r],
                                static_cast<std::uint32_t>(r));
    }
    std::sort(y_buckets_.begin(), y_buckets_.end());

    log2_cell_.resize(ax_, ay_);
    for (int i = 0; i < ax_; ++i) {
        for (int j = 0; j < ay_; ++j) {
            const double p = src.pmf()(i, j);
            log2_cell_(i, j) = p > 0.0 ? std::log2(p) : -std::numeric_limits<double>::infinity();
        }
    }
}

double BinningCodebook::pair_log2_prob(std::uint64_t x_rank, std::uint64_t y_rank) const {
    // Accumulate counts per pmf cell, then combine in canonical cell order:
    // pairs with the same count signature get the bit-identical value.
    std::vector<int> counts(static_cast<std::size_t>(ax_) * static_cast<std::size_t>(ay_), 0);
    std::uint64_t xr = x_rank, yr = y_rank;
    for (int t = 0; t < cfg_.K; ++t) {
        const int xi = static_cast<int>(xr % static_cast<std::uint64_t>(ax_));
        const int yi = static_cast<int>(yr % static_cast<std::uint64_t>(ay_));
        xr /= static_cast<std::uint64_t>(ax_);
        yr /= static_cast<std::uint64_t>(ay_);
        ++counts[static_cast<std::size_t>(xi * ay_ + yi)];
    }
    double lp = 0.0;
    for (int i = 0; i < ax_; ++i) {
        for (int j = 0; j < ay_; ++j) {
            const int c = counts[static_cast<std::size_t>(i * ay_ + j)];
            if (c > 0) lp += c * log2_cell_(i, j);
        }
    }
    return lp;
}

PrototypeCodeword encode(const BinningCodebook& cb, const SequencePair& pair) {
    if (pair.length() != cb.K()) {
        throw LengthMismatch("encode: sequence length does not match codebook K");
    }
    for (int s : pair.x_seq) {
        if (s < 0 || s >= cb.alphabet_x()) throw LengthMismatch("encode: x symbol out of alphabet");
    }
    for (int s : pair.y_seq) {
        if (s < 0 || s >= cb.alphabet_y()) throw LengthMismatch("encode: y symbol out of alphabet");
    }
    const std::uint64_t xr = sequence_rank(pair.x_seq, cb.alphabet_x());
    const std::uint64_t yr = sequence_rank(pair.y_seq, cb.alphabet_y());
    PrototypeCodeword cw;
    cw.w_x = cb.f_x_at(xr);
    cw.w_cx = cb.f_cx_at(xr);
    cw.w_y = cb.f_y_at(yr);
    cw.w_cy = cb.f_cy_at(yr);
    cw.m_x = cb.m_x();
    cw.m_y = cb.m_y();
    cw.m_cx = cb.m_cx();
    cw.m_cy = cb.m_cy();
    return cw;
}

SequencePair decode(const BinningCodebook& cb, const PrototypeCodeword& cw) {
    if (cw.w_x >= cb.m_x() || cw.w_y >= cb.m_y() || cw.w_cx >= cb.m_cx() || cw.w_cy >= cb.m_cy()) {
        throw OutOfRange("decode: codeword index out of range");
    }
    const std::uint64_t x_key = cw.w_x * cb.m_cx() + cw.w_cx;
    const std::uint64_t y_key = cw.w_y * cb.m_cy() + cw.w_cy;
    const auto x_range = std::equal_range(
        cb.x_buckets_.begin(), cb.x_buckets_.end(), std::make_pair(x_key, std::uint32_t{0}),
        [](const auto& a, const auto& b) { return a.first < b.first; });
    const auto y_range = std::equal_range(
        cb.y_buckets_.begin(), cb.y_buckets_.end(), std::make_pair(y_key, std::uint32_t{0}),
        [](const auto& a, const auto& b) { return a.first < b.first; });

    double best = -std::numeric_limits<double>::infinity();
    std::uint64_t best_x = 0, best_y = 0;
    bool found = false;
    // Bucket entries are rank-sorted, so x-major iteration scans candidate
    // pairs in lexicographic order; a strict improvement test gives the
    // lexicographic tie-break for free.
    for (auto it = x_range.first; it != x_range.second; ++it) {
        for (auto jt = y_range.first; jt != y_range.second; ++jt) {
            const double lp = cb.pair_log2_prob(it->second, jt->second);
            if (std::isinf(lp)) continue;  // zero-probability pair can never be the source
            if (lp > best) {
                best = lp;
                best_x = it->second;
                best_y = jt->second;
                found = true;
            }
        }
    }
    if (!found) {
        throw NoConsistentPair("decode: no positive-probability pair matches the codeword");
    }
    SequencePair pair;
    pair.x_seq = sequence_unrank(best_x, cb.K(), cb.alphabet_x());
    pair.y_seq = sequence_unrank(best_y, cb.K(), cb.alphabet_y());
    pair.k1 = cb.K();
    pair.k2 = 0;
    return pair;
}

SplitCodeword split(std::uint64_t w, std::uint64_t m, std::uint64_t m1) {
    if (m1 == 0) throw ZeroModulus("split: m1 must be >= 1");
    if (m == 0) throw ZeroModulus("split: m must be >= 1");
    if (w >= m) throw OutOfRange("split: w out of range");
    SplitCodeword sc;
    sc.m1 = m1;
    sc.m2 = (m + m1 - 1) / m1;
    sc.w1 = w % m1;
    sc.w2 = (w - sc.w1) / m1;
    return sc;
}

std::uint64_t unsplit(const SplitCodeword& sc) {
    return sc.w2 * sc.m1 + sc.w1;
}

} // namespace corrcipher
