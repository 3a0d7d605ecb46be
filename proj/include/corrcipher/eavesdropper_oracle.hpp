#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "corrcipher/cipher.hpp"
#include "corrcipher/source_model.hpp"
#include "corrcipher/sw_codec.hpp"

namespace corrcipher {

/// What the wiretapper sees: any subset of the two transmitted words (with
/// per-slot overrides for partial wiretaps) plus raw source symbols of Y at
/// the leaked positions.
struct ObservationSpec {
    enum class SlotView { Transmitted, Hidden };

    bool include_w1 = true;
    bool include_w2 = true;
    std::vector<int> leaked_y_positions;
    std::array<SlotView, 6> slot_view{SlotView::Transmitted, SlotView::Transmitted,
                                      SlotView::Transmitted, SlotView::Transmitted,
                                      SlotView::Transmitted, SlotView::Transmitted};

    /// Both words plus the trailing k2 symbols of Y.
    static ObservationSpec full_wiretap(int K, int k2);
    /// Nothing at all (sanity baseline).
    static ObservationSpec nothing();

    bool slot_visible(SlotId id) const;
};

/// Exact per-symbol conditional entropies of the sources given the
/// observation, against the thresholds the selected sub-case promises.
struct LeakageReport {
    double h_x_given_obs = 0.0;
    double h_y_given_obs = 0.0;
    double h_xy_given_obs = 0.0;

    SecurityTarget target;
    Subcase subcase = Subcase::Case1Low;
    MuComponents mu;
    double eps_prime = 0.0;

    // Thresholds are reported so every flag is recomputable from the numbers.
    double threshold_x = 0.0;
    double threshold_y = 0.0;
    double threshold_xy = 0.0;
    bool pass_x = true;
    bool pass_y = true;
    bool pass_xy = true;

    bool all_pass() const { return pass_x && pass_y && pass_xy; }
};

struct InequalityRow {
    std::string id;
    double lhs = 0.0;
    double rhs = 0.0;
    bool pass = false;
};

/// Finite-size slack used when checking the asymptotic bounds at desk scale.
double default_eps_prime(int K);

/// Exact joint distribution of (sources, keys, observation) by full
/// enumeration, then the three conditional entropies, per symbol. Never
/// sampled: secrecy claims are equality claims where noise would hide
/// violations. `chain` routes the transmission through chain_mask first.
LeakageReport exact_leakage(const JointSource& src, const BinningCodebook& cb,
                            const KeyPlan& plan, const ObservationSpec& spec,
                            bool chain = false, double eps_prime = -1.0);

/// Exact mutual information, in bits, between one keyed slot's transmitted
/// value and everything it is claimed independent of: the source pair and
/// every other slot that does not share this slot's key component.
/// Requires the slot to be covered by a fresh uniform key of its own modulus.
double pad_independence_check(const JointSource& src, const BinningCodebook& cb,
                              const KeyPlan& plan, SlotId slot);

/// Exact entropy, in bits, of one slot's plaintext given the observation.
/// Used to quantify what chain masking buys for the chained slot.
double slot_plaintext_entropy_given_obs(const JointSource& src, const BinningCodebook& cb,
                                        const KeyPlan& plan, const ObservationSpec& spec,
                                        SlotId slot, bool chain = false);

/// The uncertainty lower bounds satisfied by the prototype code and its
/// splits, each evaluated exactly at block length K with slack eps_prime.
/// k2 feeds the leaked-block row; eps_prime < 0 picks the default for K.
std::vector<InequalityRow> inequality_suite(const JointSource& src, const BinningCodebook& cb,
                                            const KeyPlan& plan, int k2,
                                            double eps_prime = -1.0);

} // namespace corrcipher
