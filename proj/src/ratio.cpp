#include "whyd/ratio.hpp"

#include <numeric>
#include <stdexcept>

namespace whyd {

Ratio::Ratio(std::uint64_t num, std::uint64_t den) {
    if (den == 0) throw std::invalid_argument("zero denominator");
    if (num == 0) return;
    std::uint64_t g = std::gcd(num, den);
    num_ = num / g;
    den_ = den / g;
}

std::string Ratio::str() const {
    if (num_ == 0) return "0";
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
}

Ratio Ratio::parse(const std::string& text) {
    auto slash = text.find('/');
    if (slash == std::string::npos) return Ratio(std::stoull(text), 1);
    return Ratio(std::stoull(text.substr(0, slash)), std::stoull(text.substr(slash + 1)));
}

std::strong_ordering operator<=>(const Ratio& a, const Ratio& b) {
    unsigned __int128 lhs = static_cast<unsigned __int128>(a.num_) * b.den_;
    unsigned __int128 rhs = static_cast<unsigned __int128>(b.num_) * a.den_;
    if (lhs < rhs) return std::strong_ordering::less;
    if (lhs > rhs) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

}  // namespace whyd
