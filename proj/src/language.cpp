#include "wb/language.hpp"

#include <set>

namespace wb {

Language::Language(std::vector<Symbol> symbols) : symbols_(std::move(symbols)) {
    std::set<std::string> seen;
    for (const auto& s : symbols_) {
        if (!seen.insert(s.name).second)
            throw std::invalid_argument("duplicate symbol name: " + s.name);
        if (s.asymmetric) {
            int fwd = static_cast<int>(oriented_.size());
            oriented_.push_back(s.name + "+");
            oriented_.push_back(s.name + "-");
            dual_.push_back(fwd + 1);
            dual_.push_back(fwd);
        } else {
            oriented_.push_back(s.name);
            dual_.push_back(static_cast<int>(oriented_.size()) - 1);
        }
    }
}

LanguagePtr Language::two_asymmetric_rg() {
    static LanguagePtr lang =
        std::make_shared<Language>(std::vector<Symbol>{{"R", true}, {"G", true}});
    return lang;
}

int Language::id_of(std::string_view name) const {
    for (size_t i = 0; i < oriented_.size(); ++i)
        if (oriented_[i] == name) return static_cast<int>(i);
    throw std::invalid_argument("unknown oriented symbol: " + std::string(name));
}

bool Language::has(std::string_view name) const {
    for (const auto& n : oriented_)
        if (n == name) return true;
    return false;
}

} // namespace wb
