#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>

#include "corrcipher/errors.hpp"
#include "corrcipher/source_model.hpp"
#include "corrcipher/sw_codec.hpp"

namespace corrcipher {

/// Which secrecy guarantee an experiment asks for. Case 1 protects the joint
/// uncertainty h_xy, case 2 protects (h_x, h_y) individually, case 3 protects
/// h_y only and is handled as case 2 with h_x = 0.
struct SecurityTarget {
    int case_id = 1;
    double h_xy = 0.0;  // case 1
    double h_x = 0.0;   // case 2
    double h_y = 0.0;   // cases 2 and 3

    static SecurityTarget case1(double h_xy) { return SecurityTarget{1, h_xy, 0.0, 0.0}; }
    static SecurityTarget case2(double h_x, double h_y) { return SecurityTarget{2, 0.0, h_x, h_y}; }
    static SecurityTarget case3(double h_y) { return SecurityTarget{3, 0.0, 0.0, h_y}; }
};

/// Which threshold comparison against I(X;Y) selected the construction.
enum class Subcase {
    Case1High,  // h_xy > I: fresh pad on the y1 split, reused onto x1, commons keyed
    Case1Low,   // h_xy <= I: only the x-side common bin keyed, sized 2^ceil(K h_xy)
    Case2High,  // h_x > I
    Case2Mid,   // h_x <= I < h_y
    Case2Low,   // h_y <= I
};

const char* subcase_name(Subcase sc);

/// Transmitted-word slots in fixed order. X1/X2 are the low/high split of
/// w_x, CX the x-side common bin; same for the second word.
enum class SlotId : int { X1 = 0, X2 = 1, CX = 2, Y1 = 3, Y2 = 4, CY = 5 };

/// Key components. KY1 is the fresh pad drawn for the y1 slot; in the high
/// sub-cases the same value also pads x1 (key reuse, as constructed).
enum class KeyId : int { None = 0, KY1 = 1, KCX = 2, KCY = 3 };

/// Moduli of the split points and of every keyed portion, plus which slots
/// carry keys in the selected sub-case. Also records the common-bin moduli
/// the codebook must use so that codeword and plan agree.
struct KeyPlan {
    Subcase subcase = Subcase::Case1Low;
    int K = 0;
    SecurityTarget target;         // what this plan was sized for
    double key_rate_target = 0.0;  // bits/symbol the construction aims at

    std::uint64_t m_x1 = 1;
    std::uint64_t m_y1 = 1;
    std::uint64_t m_cx = 1;  // common-bin modulus required of the codebook
    std::uint64_t m_cy = 1;

    // Key moduli per component; 1 means the component is absent.
    std::uint64_t m_ky1 = 1;
    std::uint64_t m_kcx = 1;
    std::uint64_t m_kcy = 1;

    bool x1_reuses_ky1 = false;

    int keyed_slot_count() const;
    /// Achieved key rate (1/K) sum of log2 of the key moduli.
    double key_rate_achieved() const;
    /// Key component covering a slot in this plan (None if sent in clear).
    KeyId slot_key(SlotId slot) const;
};

/// Sampled values of the key components, uniform over the plan's moduli.
struct KeySchedule {
    std::uint64_t w_ky1 = 0;
    std::uint64_t w_kcx = 0;
    std::uint64_t w_kcy = 0;
    std::uint64_t m_ky1 = 1;
    std::uint64_t m_kcx = 1;
    std::uint64_t m_kcy = 1;
};

struct Slot {
    SlotId id = SlotId::X1;
    std::uint64_t value = 0;
    std::uint64_t modulus = 1;
    KeyId key = KeyId::None;
    // Set when chain masking padded this slot with the plaintext of another
    // (keyed) slot; the receiver must unchain before unmasking.
    std::optional<SlotId> chained_from;
};

/// The two transmitted words: (x1, x2, cx) and (y1, y2, cy), each slot
/// annotated with the key or chain that covers it. The private-bin moduli
/// are kept so the receiver can reassemble the exact codeword even when a
/// split point exceeds the bin modulus.
struct TransmittedPair {
    std::array<Slot, 3> w1;
    std::array<Slot, 3> w2;
    std::uint64_t m_x = 1;
    std::uint64_t m_y = 1;

    const Slot& slot(SlotId id) const;
    Slot& slot(SlotId id);
};

/// Sizes all key material for the requested case. Sub-case selection follows
/// the threshold comparisons against I(X;Y); `alpha` is the fraction of the
/// common rate carried by the x side (ignored by the low sub-cases, which
/// size the x-side common bin from the target directly). MuComponents enter
/// only through the validity range of the target.
KeyPlan plan_keys(const SourceStats& stats, int K, const SecurityTarget& target,
                  const MuComponents& mu, double alpha = 0.5);

KeySchedule generate_keys(const KeyPlan& plan, std::uint64_t seed);

/// One-time pad over Z_M: mask adds the key, unmask subtracts it.
std::uint64_t mask(std::uint64_t w, std::uint64_t k, std::uint64_t M);
std::uint64_t unmask(std::uint64_t c, std::uint64_t k, std::uint64_t M);

/// Splits the private bins at the plan's split points and assembles both
/// transmitted words, masking exactly the slots the sub-case keys.
TransmittedPair build_transmission(const PrototypeCodeword& cw, const KeyPlan& plan,
                                   const KeySchedule& keys);

/// Exact inverse of build_transmission (chained slots are unchained first).
PrototypeCodeword receiver_decrypt(const TransmittedPair& tp, const KeyPlan& plan,
                                   const KeySchedule& keys);

/// Key-length reduction: pads the first unkeyed non-trivial slot with the
/// plaintext of the largest fresh-keyed slot, spending no new key material.
/// The keys are needed to recover that plaintext from its transmitted form.
TransmittedPair chain_mask(const TransmittedPair& tp, const KeyPlan& plan,
                           const KeySchedule& keys);

} // namespace corrcipher
