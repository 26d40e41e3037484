#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <string>
#include <string_view>

namespace whyd {

/// Interned string. Two symbols are equal iff they were interned from equal
/// text; ordering follows the text so that sorted containers are canonical.
class Symbol {
public:
    Symbol() = default;

    static Symbol intern(std::string_view text);

    const std::string& str() const { return *text_; }
    bool empty() const { return text_->empty(); }

    friend bool operator==(Symbol a, Symbol b) { return a.text_ == b.text_; }
    friend std::strong_ordering operator<=>(Symbol a, Symbol b) {
        if (a.text_ == b.text_) return std::strong_ordering::equal;
        return a.text_->compare(*b.text_) < 0 ? std::strong_ordering::less
                                               : std::strong_ordering::greater;
    }

    std::size_t hash() const { return std::hash<const void*>{}(text_); }

private:
    explicit Symbol(const std::string* text) : text_(text) {}

    static const std::string* empty_text();

    const std::string* text_ = empty_text();
};

}  // namespace whyd

template <>
struct std::hash<whyd::Symbol> {
    std::size_t operator()(whyd::Symbol s) const noexcept { return s.hash(); }
};
