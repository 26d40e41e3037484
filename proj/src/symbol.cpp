#include "whyd/symbol.hpp"

#include <memory>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>

namespace whyd {

namespace {

struct Interner {
    std::shared_mutex mutex;
    std::unordered_map<std::string_view, std::unique_ptr<std::string>> table;
};

Interner& interner() {
    static Interner instance;
    return instance;
}

}  // namespace

const std::string* Symbol::empty_text() {
    static const std::string* empty = intern("").text_;
    return empty;
}

Symbol Symbol::intern(std::string_view text) {
    Interner& in = interner();
    {
        std::shared_lock lock(in.mutex);
        if (auto it = in.table.find(text); it != in.table.end()) return Symbol(it->second.get());
    }
    std::unique_lock lock(in.mutex);
    if (auto it = in.table.find(text); it != in.table.end()) return Symbol(it->second.get());
    auto owned = std::make_unique<std::string>(text);
    const std::string* ptr = owned.get();
    in.table.emplace(std::string_view(*ptr), std::move(owned));
    return Symbol(ptr);
}

}  // namespace whyd
