#include "corrcipher/cipher.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "corrcipher/rng.hpp"

namespace corrcipher {

namespace {

constexpr double kEps = 1e-9;

std::uint64_t pow2_of_bits(double bits) { return 1ULL << ceil_bits(bits); }

int log2_exact(std::uint64_t power_of_two) {
    return std::countr_zero(power_of_two);
}

} // namespace

const char* subcase_name(Subcase sc) {
    switch (sc) {
        case Subcase::Case1High: return "case1_high";
        case Subcase::Case1Low: return "case1_low";
        case Subcase::Case2High: return "case2_high";
        case Subcase::Case2Mid: return "case2_mid";
        case Subcase::Case2Low: return "case2_low";
    }
    return "?";
}

int KeyPlan::keyed_slot_count() const {
    switch (subcase) {
        case Subcase::Case1High:
        case Subcase::Case2High:
        case Subcase::Case2Mid:
            return 3;  // ky1, kcx, kcy
        case Subcase::Case1Low:
        case Subcase::Case2Low:
            return 1;  // kcx only
    }
    return 0;
}

double KeyPlan::key_rate_achieved() const {
    const int bits = log2_exact(m_ky1) + log2_exact(m_kcx) + log2_exact(m_kcy);
    return static_cast<double>(bits) / static_cast<double>(K);
}

KeyId KeyPlan::slot_key(SlotId slot) const {
    const bool high_or_mid = subcase == Subcase::Case1High || subcase == Subcase::Case2High ||
                             subcase == Subcase::Case2Mid;
    switch (slot) {
        case SlotId::X1: return x1_reuses_ky1 ? KeyId::KY1 : KeyId::None;
        case SlotId::X2: return KeyId::None;
        case SlotId::CX: return KeyId::KCX;
        case SlotId::Y1: return high_or_mid ? KeyId::KY1 : KeyId::None;
        case SlotId::Y2: return KeyId::None;
        case SlotId::CY: return high_or_mid ? KeyId::KCY : KeyId::None;
    }
    return KeyId::None;
}

const Slot& TransmittedPair::slot(SlotId id) const {
    const int i = static_cast<int>(id);
    return i < 3 ? w1[static_cast<std::size_t>(i)] : w2[static_cast<std::size_t>(i - 3)];
}

Slot& TransmittedPair::slot(SlotId id) {
    const int i = static_cast<int>(id);
    return i < 3 ? w1[static_cast<std::size_t>(i)] : w2[static_cast<std::size_t>(i - 3)];
}

KeyPlan plan_keys(const SourceStats& stats, int K, const SecurityTarget& target,
                  const MuComponents& mu, double alpha) {
    if (K < 1) throw TargetOutOfRange("plan_keys: K must be >= 1");
    if (alpha < 0.0 || alpha > 1.0) throw TargetOutOfRange("plan_keys: alpha outside [0,1]");

    SecurityTarget t = target;
    if (t.case_id == 3) {
        t = SecurityTarget::case2(0.0, t.h_y);
    }

    KeyPlan plan;
    plan.K = K;
    plan.target = target;
    const double I = stats.i_xy;

    if (t.case_id == 1) {
        const double h_max = stats.h_xy - mu.mu_c - mu.mu_y;
        if (t.h_xy < -kEps || t.h_xy > h_max + kEps) {
            throw TargetOutOfRange("plan_keys: h_xy outside [0, H(X,Y) - mu_c - mu_y]");
        }
        plan.key_rate_target = t.h_xy;
        if (t.h_xy > I + kEps) {
            plan.subcase = Subcase::Case1High;
            plan.m_y1 = pow2_of_bits(K * (t.h_xy - I));
            plan.m_x1 = std::min(pow2_of_bits(K * stats.h_x_given_y), plan.m_y1);
            plan.m_cx = pow2_of_bits(alpha * K * I);
            plan.m_cy = pow2_of_bits((1.0 - alpha) * K * I);
            plan.m_ky1 = plan.m_y1;
            plan.m_kcx = plan.m_cx;
            plan.m_kcy = plan.m_cy;
            plan.x1_reuses_ky1 = true;
        } else {
            plan.subcase = Subcase::Case1Low;
            plan.m_cx = pow2_of_bits(K * t.h_xy);
            plan.m_cy = pow2_of_bits(K * (I - t.h_xy));
            plan.m_kcx = plan.m_cx;
        }
        return plan;
    }

    if (t.case_id != 2) throw TargetOutOfRange("plan_keys: case_id must be 1, 2 or 3");

    if (t.h_x < -kEps || t.h_x > stats.h_x - mu.mu_c + kEps) {
        throw TargetOutOfRange("plan_keys: h_x outside [0, H(X) - mu_c]");
    }
    if (t.h_y < -kEps || t.h_y > stats.h_y - mu.mu_c - mu.mu_y + kEps) {
        throw TargetOutOfRange("plan_keys: h_y outside [0, H(Y) - mu_c - mu_y]");
    }
    if (t.h_x > t.h_y + kEps) {
        // The constructions key the y side and protect x through key reuse
        // and the commons; they only make sense for h_x <= h_y.
        throw TargetOutOfRange("plan_keys: case 2 requires h_x <= h_y");
    }
    plan.key_rate_target = t.h_y;

    if (t.h_x > I + kEps) {
        plan.subcase = Subcase::Case2High;
        plan.m_y1 = pow2_of_bits(K * (t.h_y - I));
        plan.m_x1 = std::min(pow2_of_bits(K * stats.h_x_given_y), plan.m_y1);
        plan.m_cx = pow2_of_bits(alpha * K * I);
        plan.m_cy = pow2_of_bits((1.0 - alpha) * K * I);
        plan.m_ky1 = plan.m_y1;
        plan.m_kcx = plan.m_cx;
        plan.m_kcy = plan.m_cy;
        plan.x1_reuses_ky1 = true;
    } else if (t.h_y > I + kEps) {
        plan.subcase = Subcase::Case2Mid;
        plan.m_y1 = pow2_of_bits(K * (t.h_y - I));
        plan.m_cx = pow2_of_bits(alpha * K * I);
        plan.m_cy = pow2_of_bits((1.0 - alpha) * K * I);
        plan.m_ky1 = plan.m_y1;
        plan.m_kcx = plan.m_cx;
        plan.m_kcy = plan.m_cy;
    } else {
        plan.subcase = Subcase::Case2Low;
        plan.m_cx = pow2_of_bits(K * t.h_y);
        plan.m_cy = pow2_of_bits(K * (I - t.h_y));
        plan.m_kcx = plan.m_cx;
    }
    return plan;
}

KeySchedule generate_keys(const KeyPlan& plan, std::uint64_t seed) {
    Rng rng(mix_seed(seed, 0x6b657973ULL));
    KeySchedule ks;
    ks.m_ky1 = plan.m_ky1;
    ks.m_kcx = plan.m_kcx;
    ks.m_kcy = plan.m_kcy;
    ks.w_ky1 = rng.next_below(plan.m_ky1);
    ks.w_kcx = rng.next_below(plan.m_kcx);
    ks.w_kcy = rng.next_below(plan.m_kcy);
    return ks;
}

std::uint64_t mask(std::uint64_t w, std::uint64_t k, std::uint64_t M) {
    if (M == 0) throw ZeroModulus("mask: modulus must be >= 1");
    if (w >= M || k >= M) throw OutOfRange("mask: operand not below modulus");
    return (w + k) % M;
}

std::uint64_t unmask(std::uint64_t c, std::uint64_t k, std::uint64_t M) {
    if (M == 0) throw ZeroModulus("unmask: modulus must be >= 1");
    if (c >= M || k >= M) throw OutOfRange("unmask: operand not below modulus");
    return (c + M - k) % M;
}

namespace {

void check_schedule(const KeyPlan& plan, const KeySchedule& keys) {
    if (keys.m_ky1 > plan.m_ky1 || keys.m_kcx > plan.m_kcx || keys.m_kcy > plan.m_kcy) {
        throw PlanMismatch("key schedule moduli exceed the plan");
    }
    if (keys.w_ky1 >= keys.m_ky1 || keys.w_kcx >= keys.m_kcx || keys.w_kcy >= keys.m_kcy) {
        throw PlanMismatch("key value out of range for its modulus");
    }
}

std::uint64_t key_for_slot(const KeySchedule& keys, KeyId id) {
    switch (id) {
        case KeyId::KY1: return keys.w_ky1;
        case KeyId::KCX: return keys.w_kcx;
        case KeyId::KCY: return keys.w_kcy;
        case KeyId::None: return 0;
    }
    return 0;
}

} // namespace

TransmittedPair build_transmission(const PrototypeCodeword& cw, const KeyPlan& plan,
                                   const KeySchedule& keys) {
    if (cw.m_cx != plan.m_cx || cw.m_cy != plan.m_cy) {
        throw PlanMismatch("build_transmission: codeword common moduli do not match the plan");
    }
    check_schedule(plan, keys);

    const SplitCodeword sx = split(cw.w_x, cw.m_x, plan.m_x1);
    const SplitCodeword sy = split(cw.w_y, cw.m_y, plan.m_y1);

    TransmittedPair tp;
    tp.w1 = {Slot{SlotId::X1, sx.w1, sx.m1, plan.slot_key(SlotId::X1), std::nullopt},
             Slot{SlotId::X2, sx.w2, sx.m2, KeyId::None, std::nullopt},
             Slot{SlotId::CX, cw.w_cx, cw.m_cx, plan.slot_key(SlotId::CX), std::nullopt}};
    tp.w2 = {Slot{SlotId::Y1, sy.w1, sy.m1, plan.slot_key(SlotId::Y1), std::nullopt},
             Slot{SlotId::Y2, sy.w2, sy.m2, KeyId::None, std::nullopt},
             Slot{SlotId::CY, cw.w_cy, cw.m_cy, plan.slot_key(SlotId::CY), std::nullopt}};
    tp.m_x = cw.m_x;
    tp.m_y = cw.m_y;

    for (Slot* s : {&tp.w1[0], &tp.w1[2], &tp.w2[0], &tp.w2[2]}) {
        if (s->key == KeyId::None) continue;
        const std::uint64_t k = key_for_slot(keys, s->key) % s->modulus;
        s->value = mask(s->value, k, s->modulus);
    }
    return tp;
}

PrototypeCodeword receiver_decrypt(const TransmittedPair& tp, const KeyPlan& plan,
                                   const KeySchedule& keys) {
    check_schedule(plan, keys);
    if (tp.slot(SlotId::CX).modulus != plan.m_cx || tp.slot(SlotId::CY).modulus != plan.m_cy ||
        tp.slot(SlotId::X1).modulus != plan.m_x1 || tp.slot(SlotId::Y1).modulus != plan.m_y1) {
        throw PlanMismatch("receiver_decrypt: slot moduli do not match the plan");
    }

    // Plaintexts of the keyed slots first; chained slots depend on them.
    std::array<std::uint64_t, 6> plain{};
    for (int i = 0; i < 6; ++i) {
        const Slot& s = tp.slot(static_cast<SlotId>(i));
        if (s.key == KeyId::None) {
            plain[static_cast<std::size_t>(i)] = s.value;
        } else {
            const std::uint64_t k = key_for_slot(keys, s.key) % s.modulus;
            plain[static_cast<std::size_t>(i)] = unmask(s.value, k, s.modulus);
        }
    }
    for (int i = 0; i < 6; ++i) {
        const Slot& s = tp.slot(static_cast<SlotId>(i));
        if (!s.chained_from) continue;
        const std::uint64_t pad =
            plain[static_cast<std::size_t>(static_cast<int>(*s.chained_from))] % s.modulus;
        plain[static_cast<std::size_t>(i)] =
            unmask(plain[static_cast<std::size_t>(i)], pad, s.modulus);
    }

    PrototypeCodeword cw;
    cw.m_x = tp.m_x;
    cw.m_y = tp.m_y;
    cw.m_cx = plan.m_cx;
    cw.m_cy = plan.m_cy;
    SplitCodeword sx{plain[0], plain[1], tp.slot(SlotId::X1).modulus, tp.slot(SlotId::X2).modulus};
    SplitCodeword sy{plain[3], plain[4], tp.slot(SlotId::Y1).modulus, tp.slot(SlotId::Y2).modulus};
    cw.w_x = unsplit(sx);
    cw.w_y = unsplit(sy);
    cw.w_cx = plain[2];
    cw.w_cy = plain[5];
    return cw;
}

TransmittedPair chain_mask(const TransmittedPair& tp, const KeyPlan& plan,
                           const KeySchedule& keys) {
    check_schedule(plan, keys);

    // Eligible pad sources: slots under a fresh uniform key of their own
    // modulus. The x1 slot in the high sub-cases reuses the y1 key, so it
    // cannot anchor a chain.
    const Slot* source = nullptr;
    for (int i = 0; i < 6; ++i) {
        const Slot& s = tp.slot(static_cast<SlotId>(i));
        if (s.key == KeyId::None || s.modulus <= 1) continue;
        if (s.id == SlotId::X1 && plan.x1_reuses_ky1) continue;
        std::uint64_t key_mod = 1;
        switch (s.key) {
            case KeyId::KY1: key_mod = keys.m_ky1; break;
            case KeyId::KCX: key_mod = keys.m_kcx; break;
            case KeyId::KCY: key_mod = keys.m_kcy; break;
            case KeyId::None: break;
        }
        if (key_mod != s.modulus) continue;
        if (!source || s.modulus > source->modulus) source = &tp.slot(static_cast<SlotId>(i));
    }
    if (!source) {
        throw NoKeyedSlotAvailable("chain_mask: no fresh-keyed slot to chain from");
    }

    Slot* target = nullptr;
    TransmittedPair out = tp;
    for (int i = 0; i < 6; ++i) {
        Slot& s = out.slot(static_cast<SlotId>(i));
        if (s.key != KeyId::None || s.chained_from || s.modulus <= 1) continue;
        if (s.modulus > source->modulus) continue;
        target = &s;
        break;
    }
    if (!target) {
        throw NoKeyedSlotAvailable("chain_mask: no unkeyed slot with modulus within the source's");
    }

    const std::uint64_t src_key = key_for_slot(keys, source->key) % source->modulus;
    const std::uint64_t src_plain = unmask(source->value, src_key, source->modulus);
    target->value = mask(target->value, src_plain % target->modulus, target->modulus);
    target->chained_from = source->id;
    return out;
}

} // namespace corrcipher
