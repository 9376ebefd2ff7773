#ifndef WB_LANGUAGE_HPP
#define WB_LANGUAGE_HPP

#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace wb {

enum class Orientation { Forward, Backward, Symmetric };

/// A binary relational signature. Each named symbol is either symmetric
/// (one oriented symbol "X") or asymmetric (two oriented symbols "X+", "X-"
/// that are duals of each other). Oriented symbols are referred to by small
/// integer ids throughout.
class Language {
public:
    struct Symbol {
        std::string name;
        bool asymmetric = true;
    };

    explicit Language(std::vector<Symbol> symbols);

    /// The language {R+, R-, G+, G-} used by the 2-multi-tournament examples.
    static std::shared_ptr<const Language> two_asymmetric_rg();

    int symbol_count() const { return static_cast<int>(oriented_.size()); }
    int dual(int sym) const { return dual_.at(static_cast<size_t>(sym)); }
    bool is_symmetric(int sym) const { return dual(sym) == sym; }

    const std::string& name(int sym) const { return oriented_.at(static_cast<size_t>(sym)); }
    /// Id of an oriented symbol by display name ("R+", "G-", "X").
    int id_of(std::string_view name) const;
    bool has(std::string_view name) const;

    const std::vector<Symbol>& base_symbols() const { return symbols_; }

    bool operator==(const Language& o) const { return oriented_ == o.oriented_; }

private:
    std::vector<Symbol> symbols_;
    std::vector<std::string> oriented_;
    std::vector<int> dual_;
};

using LanguagePtr = std::shared_ptr<const Language>;

} // namespace wb

#endif
