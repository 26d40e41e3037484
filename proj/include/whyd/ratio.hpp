#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace whyd {

/// Exact nonnegative rational, always kept in lowest terms.
class Ratio {
public:
    constexpr Ratio() = default;
    Ratio(std::uint64_t num, std::uint64_t den);

    /// 1/k.
    static Ratio inverse_of(std::uint64_t k) { return Ratio(1, k); }
    static Ratio zero() { return Ratio(); }
    static Ratio one() { return Ratio(1, 1); }

    std::uint64_t num() const { return num_; }
    std::uint64_t den() const { return den_; }
    bool is_zero() const { return num_ == 0; }

    /// "0", "1", "1/k" or "p/q".
    std::string str() const;
    static Ratio parse(const std::string& text);

    friend bool operator==(const Ratio&, const Ratio&) = default;
    friend std::strong_ordering operator<=>(const Ratio& a, const Ratio& b);

private:
    std::uint64_t num_ = 0;
    std::uint64_t den_ = 1;
};

}  // namespace whyd
