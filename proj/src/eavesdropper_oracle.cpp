#include "corrcipher/eavesdropper_oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace corrcipher {

namespace {

constexpr double kEps = 1e-9;

std::uint64_t pow_u64(std::uint64_t base, int exp) {
    std::uint64_t r = 1;
    for (int i = 0; i < exp; ++i) r *= base;
    return r;
}

int log2_exact(std::uint64_t power_of_two) { return std::countr_zero(power_of_two); }

struct Entry {
    std::uint64_t obs;
    std::uint64_t target;
    std::uint64_t tiebreak;
    double p;
};

// Mixed-radix accumulator for observation signatures; overflowing 63 bits is
// an enumeration-size error, not silent truncation.
struct Packer {
    std::uint64_t value = 0;
    int bits = 0;

    void push(std::uint64_t v, std::uint64_t radix) {
        if (radix <= 1) return;
        value = value * radix + v;
        bits += log2_exact(std::bit_ceil(radix));
        if (bits > 62) {
            throw EnumerationTooLarge("observation signature exceeds 62 bits");
        }
    }
};

/// -sum p log2 p summed in the (sorted) order of the entries.
double neg_plogp(double acc, double p) { return p > 0.0 ? acc - p * std::log2(p) : acc; }

/// H(target | obs) in bits, from a full list of probability entries.
/// Entries are sorted with a deterministic total order so repeated runs and
/// the mirrored enumeration in the tests accumulate identically.
double conditional_entropy_from_entries(std::vector<Entry>& entries) {
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        if (a.obs != b.obs) return a.obs < b.obs;
        if (a.target != b.target) return a.target < b.target;
        return a.tiebreak < b.tiebreak;
    });
    double h_to = 0.0, h_o = 0.0;
    std::size_t i = 0;
    while (i < entries.size()) {
        const std::uint64_t obs = entries[i].obs;
        double obs_sum = 0.0;
        while (i < entries.size() && entries[i].obs == obs) {
            const std::uint64_t t = entries[i].target;
            double cell = 0.0;
            while (i < entries.size() && entries[i].obs == obs && entries[i].target == t) {
                cell += entries[i].p;
                ++i;
            }
            h_to = neg_plogp(h_to, cell);
            obs_sum += cell;
        }
        h_o = neg_plogp(h_o, obs_sum);
    }
    return h_to - h_o;
}

struct KeyIter {
    std::uint64_t m_ky1, m_kcx, m_kcy;
    std::uint64_t total() const { return m_ky1 * m_kcx * m_kcy; }
    KeySchedule at(std::uint64_t idx) const {
        KeySchedule ks;
        ks.m_ky1 = m_ky1;
        ks.m_kcx = m_kcx;
        ks.m_kcy = m_kcy;
        ks.w_ky1 = idx % m_ky1;
        idx /= m_ky1;
        ks.w_kcx = idx % m_kcx;
        ks.w_kcy = idx / m_kcx;
        return ks;
    }
};

void check_enumeration_cap(const BinningCodebook& cb, const KeyIter& keys) {
    const double src_bits = cb.K() * (std::log2(static_cast<double>(cb.alphabet_x())) +
                                      std::log2(static_cast<double>(cb.alphabet_y())));
    const double key_bits = std::log2(static_cast<double>(keys.total()));
    if (src_bits + key_bits > kEnumerationCapBits + kEps) {
        throw EnumerationTooLarge("exact enumeration needs " +
                                  std::to_string(src_bits + key_bits) +
                                  " bits; the cap is 26");
    }
}

PrototypeCodeword codeword_at(const BinningCodebook& cb, std::uint64_t xr, std::uint64_t yr) {
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

std::uint64_t pack_observation(const TransmittedPair& tp, const ObservationSpec& spec,
                               std::uint64_t yr, const std::vector<std::uint64_t>& y_places,
                               int alphabet_y) {
    Packer pk;
    for (int i = 0; i < 6; ++i) {
        const SlotId id = static_cast<SlotId>(i);
        if (!spec.slot_visible(id)) continue;
        const Slot& s = tp.slot(id);
        pk.push(s.value, s.modulus);
    }
    for (std::uint64_t place : y_places) {
        pk.push((yr / place) % static_cast<std::uint64_t>(alphabet_y),
                static_cast<std::uint64_t>(alphabet_y));
    }
    return pk.value;
}

std::vector<std::uint64_t> leaked_place_values(const ObservationSpec& spec, int K, int ay) {
    std::vector<std::uint64_t> places;
    for (int pos : spec.leaked_y_positions) {
        if (pos < 0 || pos >= K) throw OutOfRange("leaked y position outside the block");
        places.push_back(pow_u64(static_cast<std::uint64_t>(ay), K - 1 - pos));
    }
    return places;
}

// Shared enumeration: every (source pair, key tuple) with its probability,
// the transmitted observation and a caller-selected target value.
template <class TargetFn>
double wiretap_conditional_entropy(const JointSource& src, const BinningCodebook& cb,
                                   const KeyPlan& plan, const ObservationSpec& spec,
                                   bool chain, TargetFn&& target_of) {
    const KeyIter keys{plan.m_ky1, plan.m_kcx, plan.m_kcy};
    check_enumeration_cap(cb, keys);
    const std::uint64_t nx = cb.num_x_sequences();
    const std::uint64_t ny = cb.num_y_sequences();
    const std::uint64_t nk = keys.total();
    const double key_prob = 1.0 / static_cast<double>(nk);
    const auto y_places = leaked_place_values(spec, cb.K(), cb.alphabet_y());

    std::vector<Entry> entries;
    entries.reserve(static_cast<std::size_t>(nx * ny * nk / 2));
    std::uint64_t tiebreak = 0;
    for (std::uint64_t xr = 0; xr < nx; ++xr) {
        for (std::uint64_t yr = 0; yr < ny; ++yr) {
            const double p_pair = std::exp2(cb.pair_log2_prob(xr, yr));
            if (!(p_pair > 0.0)) continue;
            const PrototypeCodeword cw = codeword_at(cb, xr, yr);
            for (std::uint64_t ki = 0; ki < nk; ++ki) {
                const KeySchedule ks = keys.at(ki);
                TransmittedPair tp = build_transmission(cw, plan, ks);
                if (chain) tp = chain_mask(tp, plan, ks);
                entries.push_back(Entry{pack_observation(tp, spec, yr, y_places, cb.alphabet_y()),
                                        target_of(xr, yr), tiebreak++, p_pair * key_prob});
            }
        }
    }
    return conditional_entropy_from_entries(entries);
}

} // namespace

ObservationSpec ObservationSpec::full_wiretap(int K, int k2) {
    if (k2 < 0 || k2 > K) throw OutOfRange("full_wiretap: k2 outside [0, K]");
    ObservationSpec spec;
    for (int pos = K - k2; pos < K; ++pos) spec.leaked_y_positions.push_back(pos);
    return spec;
}

ObservationSpec ObservationSpec::nothing() {
    ObservationSpec spec;
    spec.include_w1 = false;
    spec.include_w2 = false;
    return spec;
}

bool ObservationSpec::slot_visible(SlotId id) const {
    const int i = static_cast<int>(id);
    const bool in_word = i < 3 ? include_w1 : include_w2;
    return in_word && slot_view[static_cast<std::size_t>(i)] == SlotView::Transmitted;
}

double default_eps_prime(int K) { return K <= 4 ? 0.25 : 0.15; }

LeakageReport exact_leakage(const JointSource& src, const BinningCodebook& cb,
                            const KeyPlan& plan, const ObservationSpec& spec, bool chain,
                            double eps_prime) {
    const int K = cb.K();
    LeakageReport rep;
    rep.target = plan.target;
    rep.subcase = plan.subcase;
    rep.eps_prime = eps_prime >= 0.0 ? eps_prime : default_eps_prime(K);
    rep.mu = mu_components(entropies(src), K,
                           static_cast<int>(spec.leaked_y_positions.size()));

    const double inv_k = 1.0 / static_cast<double>(K);
    rep.h_x_given_obs = inv_k * wiretap_conditional_entropy(
                                    src, cb, plan, spec, chain,
                                    [](std::uint64_t xr, std::uint64_t) { return xr; });
    rep.h_y_given_obs = inv_k * wiretap_conditional_entropy(
                                    src, cb, plan, spec, chain,
                                    [](std::uint64_t, std::uint64_t yr) { return yr; });
    const std::uint64_t ny = cb.num_y_sequences();
    rep.h_xy_given_obs = inv_k * wiretap_conditional_entropy(
                                     src, cb, plan, spec, chain,
                                     [ny](std::uint64_t xr, std::uint64_t yr) {
                                         return xr * ny + yr;
                                     });

    // Threshold shapes follow the achievability chains of the sub-case that
    // planned the keys; conditions that a case does not constrain get a zero
    // threshold and therefore always pass.
    switch (plan.subcase) {
        case Subcase::Case1High:
            rep.threshold_xy = plan.target.h_xy - rep.mu.mu_c - rep.mu.mu_y - rep.eps_prime;
            break;
        case Subcase::Case1Low:
            rep.threshold_xy = plan.target.h_xy - rep.mu.mu_c - rep.eps_prime;
            break;
        case Subcase::Case2High:
        case Subcase::Case2Mid:
        case Subcase::Case2Low:
            rep.threshold_x = plan.target.h_x - rep.eps_prime;
            rep.threshold_y = plan.target.h_y - rep.mu.mu_c - rep.mu.mu_y - rep.eps_prime;
            break;
    }
    rep.pass_x = rep.h_x_given_obs >= rep.threshold_x - kEps;
    rep.pass_y = rep.h_y_given_obs >= rep.threshold_y - kEps;
    rep.pass_xy = rep.h_xy_given_obs >= rep.threshold_xy - kEps;
    return rep;
}

double pad_independence_check(const JointSource& src, const BinningCodebook& cb,
                              const KeyPlan& plan, SlotId slot) {
    const KeyId key = plan.slot_key(slot);
    if (key == KeyId::None) {
        throw SlotNotKeyed("pad_independence_check: slot is sent in the clear");
    }
    if (slot == SlotId::X1 && plan.x1_reuses_ky1) {
        throw SlotNotKeyed("pad_independence_check: x1 reuses the y1 pad, not a fresh key");
    }
    std::uint64_t slot_mod = 1, key_mod = 1;
    switch (slot) {
        case SlotId::X1: slot_mod = plan.m_x1; break;
        case SlotId::Y1: slot_mod = plan.m_y1; break;
        case SlotId::CX: slot_mod = plan.m_cx; break;
        case SlotId::CY: slot_mod = plan.m_cy; break;
        default: throw SlotNotKeyed("pad_independence_check: split high parts are never keyed");
    }
    switch (key) {
        case KeyId::KY1: key_mod = plan.m_ky1; break;
        case KeyId::KCX: key_mod = plan.m_kcx; break;
        case KeyId::KCY: key_mod = plan.m_kcy; break;
        case KeyId::None: break;
    }
    if (key_mod != slot_mod) {
        throw SlotNotKeyed("pad_independence_check: key modulus does not cover the slot");
    }

    const KeyIter keys{plan.m_ky1, plan.m_kcx, plan.m_kcy};
    check_enumeration_cap(cb, keys);
    const std::uint64_t nx = cb.num_x_sequences();
    const std::uint64_t ny = cb.num_y_sequences();
    const std::uint64_t nk = keys.total();
    const double key_prob = 1.0 / static_cast<double>(nk);

    // The partner slot sharing this slot's key component is excluded from
    // the "claimed independent" side.
    const bool reuse = plan.x1_reuses_ky1;
    auto shares_key = [&](SlotId other) {
        return reuse && key == KeyId::KY1 &&
               ((slot == SlotId::Y1 && other == SlotId::X1) ||
                (slot == SlotId::X1 && other == SlotId::Y1));
    };

    std::vector<Entry> entries;  // obs = claimed-independent tuple, target = slot value
    entries.reserve(static_cast<std::size_t>(nx * ny * nk / 2));
    std::uint64_t tiebreak = 0;
    for (std::uint64_t xr = 0; xr < nx; ++xr) {
        for (std::uint64_t yr = 0; yr < ny; ++yr) {
            const double p_pair = std::exp2(cb.pair_log2_prob(xr, yr));
            if (!(p_pair > 0.0)) continue;
            const PrototypeCodeword cw = codeword_at(cb, xr, yr);
            for (std::uint64_t ki = 0; ki < nk; ++ki) {
                const KeySchedule ks = keys.at(ki);
                const TransmittedPair tp = build_transmission(cw, plan, ks);
                Packer pk;
                pk.push(xr, nx);
                pk.push(yr, ny);
                for (int i = 0; i < 6; ++i) {
                    const SlotId other = static_cast<SlotId>(i);
                    if (other == slot || shares_key(other)) continue;
                    const Slot& s = tp.slot(other);
                    pk.push(s.value, s.modulus);
                }
                entries.push_back(Entry{pk.value, tp.slot(slot).value, tiebreak++,
                                        p_pair * key_prob});
            }
        }
    }

    // I(target; obs) accumulated cell by cell; independent pads give exact
    // product cells so the sum stays at numerical zero.
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        if (a.target != b.target) return a.target < b.target;
        if (a.obs != b.obs) return a.obs < b.obs;
        return a.tiebreak < b.tiebreak;
    });
    struct Cell {
        std::uint64_t a, b;
        double p;
    };
    std::vector<Cell> cells;
    std::size_t i = 0;
    while (i < entries.size()) {
        const std::uint64_t a = entries[i].target, b = entries[i].obs;
        double c = 0.0;
        while (i < entries.size() && entries[i].target == a && entries[i].obs == b) {
            c += entries[i].p;
            ++i;
        }
        cells.push_back(Cell{a, b, c});
    }
    std::vector<std::pair<std::uint64_t, double>> marg_a;
    for (std::size_t j = 0; j < cells.size();) {
        const std::uint64_t a = cells[j].a;
        double s = 0.0;
        while (j < cells.size() && cells[j].a == a) s += cells[j++].p;
        marg_a.emplace_back(a, s);
    }
    std::vector<Cell> by_b = cells;
    std::sort(by_b.begin(), by_b.end(), [](const Cell& l, const Cell& r) {
        return l.b != r.b ? l.b < r.b : l.a < r.a;
    });
    std::vector<std::pair<std::uint64_t, double>> marg_b;
    for (std::size_t j = 0; j < by_b.size();) {
        const std::uint64_t b = by_b[j].b;
        double s = 0.0;
        while (j < by_b.size() && by_b[j].b == b) s += by_b[j++].p;
        marg_b.emplace_back(b, s);
    }
    auto lookup = [](const std::vector<std::pair<std::uint64_t, double>>& v, std::uint64_t k) {
        const auto it = std::lower_bound(v.begin(), v.end(), k,
                                         [](const auto& p, std::uint64_t key) { return p.first < key; });
        return it->second;
    };
    double mi = 0.0;
    for (const Cell& c : cells) {
        mi += c.p * std::log2(c.p / (lookup(marg_a, c.a) * lookup(marg_b, c.b)));
    }
    return mi;
}

double slot_plaintext_entropy_given_obs(const JointSource& src, const BinningCodebook& cb,
                                        const KeyPlan& plan, const ObservationSpec& spec,
                                        SlotId slot, bool chain) {
    auto plaintext_of = [&](std::uint64_t xr, std::uint64_t yr) -> std::uint64_t {
        const std::uint64_t wx = cb.f_x_at(xr);
        const std::uint64_t wy = cb.f_y_at(yr);
        switch (slot) {
            case SlotId::X1: return wx % plan.m_x1;
            case SlotId::X2: return wx / plan.m_x1;
            case SlotId::CX: return cb.f_cx_at(xr);
            case SlotId::Y1: return wy % plan.m_y1;
            case SlotId::Y2: return wy / plan.m_y1;
            case SlotId::CY: return cb.f_cy_at(yr);
        }
        return 0;
    };
    return wiretap_conditional_entropy(src, cb, plan, spec, chain, plaintext_of);
}

std::vector<InequalityRow> inequality_suite(const JointSource& src, const BinningCodebook& cb,
                                            const KeyPlan& plan, int k2, double eps_prime) {
    const int K = cb.K();
    if (k2 < 0 || k2 > K) throw OutOfRange("inequality_suite: k2 outside [0, K]");
    const double eps = eps_prime >= 0.0 ? eps_prime : default_eps_prime(K);
    const SourceStats st = entropies(src);
    const MuComponents mu = mu_components(st, K, k2);
    const double inv_k = 1.0 / static_cast<double>(K);

    const double lb_x1 = log2_exact(plan.m_x1) * inv_k;
    const double lb_y1 = log2_exact(plan.m_y1) * inv_k;
    const std::uint64_t m_y2 = plan.m_y1 >= cb.m_y() ? 1 : cb.m_y() / plan.m_y1;
    const double lb_y2 = log2_exact(m_y2) * inv_k;
    const double lb_cx = log2_exact(cb.m_cx()) * inv_k;
    const double lb_cy = log2_exact(cb.m_cy()) * inv_k;

    // Codeword features of a source pair, no keys involved.
    enum Feature { FX, FX1, FX2, FCX, FY, FY1, FY2, FCY };
    auto feature = [&](Feature f, std::uint64_t xr, std::uint64_t yr) -> std::uint64_t {
        switch (f) {
            case FX: return cb.f_x_at(xr);
            case FX1: return cb.f_x_at(xr) % plan.m_x1;
            case FX2: return cb.f_x_at(xr) / plan.m_x1;
            case FCX: return cb.f_cx_at(xr);
            case FY: return cb.f_y_at(yr);
            case FY1: return cb.f_y_at(yr) % plan.m_y1;
            case FY2: return cb.f_y_at(yr) / plan.m_y1;
            case FCY: return cb.f_cy_at(yr);
        }
        return 0;
    };

    const std::uint64_t nx = cb.num_x_sequences();
    const std::uint64_t ny = cb.num_y_sequences();

    auto cond_entropy = [&](bool target_is_x, std::initializer_list<Feature> obs_features) {
        std::vector<Entry> entries;
        entries.reserve(static_cast<std::size_t>(nx * ny / 2));
        std::uint64_t tiebreak = 0;
        for (std::uint64_t xr = 0; xr < nx; ++xr) {
            for (std::uint64_t yr = 0; yr < ny; ++yr) {
                const double p = std::exp2(cb.pair_log2_prob(xr, yr));
                if (!(p > 0.0)) continue;
                Packer pk;
                for (Feature f : obs_features) {
                    std::uint64_t radix = 1;
                    switch (f) {
                        case FX: radix = cb.m_x(); break;
                        case FX1: radix = plan.m_x1; break;
                        case FX2: radix = (plan.m_x1 >= cb.m_x()) ? 1 : cb.m_x() / plan.m_x1; break;
                        case FCX: radix = cb.m_cx(); break;
                        case FY: radix = cb.m_y(); break;
                        case FY1: radix = plan.m_y1; break;
                        case FY2: radix = m_y2; break;
                        case FCY: radix = cb.m_cy(); break;
                    }
                    pk.push(feature(f, xr, yr), radix);
                }
                entries.push_back(Entry{pk.value, target_is_x ? xr : yr, tiebreak++, p});
            }
        }
        return inv_k * conditional_entropy_from_entries(entries);
    };

    std::vector<InequalityRow> rows;
    auto add = [&](const std::string& id, double lhs, double rhs) {
        rows.push_back(InequalityRow{id, lhs, rhs, lhs >= rhs - kEps});
    };

    add("x_given_x2_y", cond_entropy(true, {FX2, FY}), st.i_xy + lb_x1 - eps);
    add("y_given_x_y2", cond_entropy(false, {FX, FY2}), st.i_xy + lb_y1 - eps);
    add("x_given_x_y2", cond_entropy(true, {FX, FY2}), st.i_xy - eps);
    add("x_given_x_y_cy", cond_entropy(true, {FX, FY, FCY}), lb_cx - eps);
    add("y_given_x_y_cy", cond_entropy(false, {FX, FY, FCY}), lb_cx - eps);
    add("x_given_y_cy", cond_entropy(true, {FY, FCY}), st.h_x_given_y + lb_cx - eps);
    add("y_given_x_cx", cond_entropy(false, {FX, FCX}), st.h_y_given_x + lb_cy - eps);
    // Leaked raw block: i.i.d. symbols make its per-symbol entropy exactly
    // H(Y), compared against the share the block is charged with.
    add("leaked_block_entropy", k2 > 0 ? st.h_y : 0.0,
        k2 > 0 ? mu.mu_c + mu.mu_y - eps : -eps);
    add("y_given_x_cx_cy_y2", cond_entropy(false, {FX, FCX, FCY, FY2}), lb_y1 - eps);
    add("y_given_x_cx_cy", cond_entropy(false, {FX, FCX, FCY}), lb_y1 + lb_y2 - eps);
    add("x_given_x2_cy", cond_entropy(true, {FX2, FCY}), lb_x1 + lb_cx - eps);
    add("y_given_x2_cy", cond_entropy(false, {FX2, FCY}), lb_y1 + lb_y2 + lb_cx - eps);
    return rows;
}

} // namespace corrcipher
