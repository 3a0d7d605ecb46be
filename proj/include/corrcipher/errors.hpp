#pragma once

#include <stdexcept>
#include <string>

namespace corrcipher {

/// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// source_model
struct NegativeProbability : Error { using Error::Error; };
struct NotNormalized : Error { using Error::Error; };

// sw_codec
struct RateBelowSlepianWolf : Error { using Error::Error; };
struct LengthMismatch : Error { using Error::Error; };
struct NoConsistentPair : Error { using Error::Error; };
struct ZeroModulus : Error { using Error::Error; };

// cipher
struct TargetOutOfRange : Error { using Error::Error; };
struct OutOfRange : Error { using Error::Error; };
struct PlanMismatch : Error { using Error::Error; };
struct NoKeyedSlotAvailable : Error { using Error::Error; };

// eavesdropper_oracle
struct SlotNotKeyed : Error { using Error::Error; };
struct EnumerationTooLarge : Error { using Error::Error; };

// harness
struct ConfigInvalid : Error { using Error::Error; };
struct IoFailure : Error { using Error::Error; };

} // namespace corrcipher
