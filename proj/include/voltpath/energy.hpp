#pragma once

#include <cassert>
#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace voltpath {

/// Largest battery capacity accepted anywhere. Keeping B below 2^61 means
/// every sum formed by the clamped addition fits comfortably in 64 bits.
inline constexpr std::int64_t kMaxCapacity = std::int64_t{1} << 61;

/// Extended integer used for depletions, charges and arc costs.
///
/// The value is one of FINITE(k), +inf or -inf. +inf marks unreachable /
/// non-traversable states; -inf is the "cannot arrive at all" sentinel used
/// only by maximum-final-charge tables and never enters clamped arithmetic.
class EnergyValue {
  public:
    constexpr EnergyValue() : kind_(Kind::PosInf), value_(0) {}

    static constexpr EnergyValue finite(std::int64_t v) { return EnergyValue(Kind::Finite, v); }
    static constexpr EnergyValue pos_inf() { return EnergyValue(Kind::PosInf, 0); }
    static constexpr EnergyValue neg_inf() { return EnergyValue(Kind::NegInf, 0); }

    constexpr bool is_finite() const { return kind_ == Kind::Finite; }
    constexpr bool is_pos_inf() const { return kind_ == Kind::PosInf; }
    constexpr bool is_neg_inf() const { return kind_ == Kind::NegInf; }

    /// Finite payload; must not be called on an infinity.
    constexpr std::int64_t value() const {
        assert(is_finite());
        return value_;
    }

    // Total order -inf < finite(k) < +inf, finite values by magnitude.
    friend constexpr auto operator<=>(const EnergyValue&, const EnergyValue&) = default;

  private:
    enum class Kind : std::uint8_t { NegInf = 0, Finite = 1, PosInf = 2 };

    constexpr EnergyValue(Kind kind, std::int64_t value) : kind_(kind), value_(value) {}

    Kind kind_;
    std::int64_t value_; // 0 for infinities so defaulted comparison works
};

inline std::string to_string(EnergyValue v) {
    if (v.is_pos_inf()) return "inf";
    if (v.is_neg_inf()) return "-inf";
    return std::to_string(v.value());
}

/// Battery capacity B plus the initial charge b at the source, 0 <= b <= B.
class BatteryConfig {
  public:
    BatteryConfig(std::int64_t capacity, std::int64_t initial)
        : capacity_(capacity), initial_(initial) {
        if (capacity < 0 || capacity > kMaxCapacity)
            throw std::invalid_argument("battery capacity must be in [0, 2^61]");
        if (initial < 0 || initial > capacity)
            throw std::invalid_argument("initial charge must be in [0, capacity]");
    }

    static BatteryConfig full(std::int64_t capacity) { return {capacity, capacity}; }

    std::int64_t capacity() const { return capacity_; }
    std::int64_t initial() const { return initial_; }

    friend bool operator==(const BatteryConfig&, const BatteryConfig&) = default;

  private:
    std::int64_t capacity_;
    std::int64_t initial_;
};

/// Throws unless 0 <= capacity <= 2^61.
inline void validate_capacity(std::int64_t capacity) {
    if (capacity < 0 || capacity > kMaxCapacity)
        throw std::invalid_argument("battery capacity must be in [0, 2^61]");
}

/// Clamp an extended integer into [0, capacity]: negative values become 0
/// (the battery cannot hold more than a full charge), values above the
/// capacity become +inf (the battery would run dry).
constexpr EnergyValue clamp_depletion(EnergyValue z, std::int64_t capacity) {
    assert(capacity >= 0);
    if (z.is_neg_inf()) throw std::invalid_argument("clamp_depletion: -inf is not clampable");
    if (z.is_pos_inf()) return EnergyValue::pos_inf();
    if (z.value() < 0) return EnergyValue::finite(0);
    if (z.value() <= capacity) return z;
    return EnergyValue::pos_inf();
}

/// Clamped addition: the depletion after traversing an arc of cost y with
/// current depletion x. +inf absorbs. Not associative.
constexpr EnergyValue clamped_add(EnergyValue x, EnergyValue y, std::int64_t capacity) {
    assert(capacity >= 0);
    if (x.is_neg_inf() || y.is_neg_inf())
        throw std::invalid_argument("clamped_add: -inf cannot enter clamped addition");
    if (x.is_pos_inf() || y.is_pos_inf()) return EnergyValue::pos_inf();
    // Sum in 128 bits so arbitrary finite operands stay exact.
    __int128 sum = static_cast<__int128>(x.value()) + y.value();
    if (sum < 0) return EnergyValue::finite(0);
    if (sum <= capacity) return EnergyValue::finite(static_cast<std::int64_t>(sum));
    return EnergyValue::pos_inf();
}

} // namespace voltpath
