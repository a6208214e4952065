#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "mdb/core/value.hpp"
#include "mdb/query/ast.hpp"
#include "mdb/query/query.hpp"

namespace mdb::query {

// Read-only resolution of query constants against a concrete database. A
// miss means the constant names nothing stored; desugaring then substitutes
// a sentinel id that matches no object.
struct ConstantResolver {
    virtual ~ConstantResolver() = default;
    virtual std::optional<ObjectId> find_named(std::string_view name) const = 0;
    // Full string semantics: short strings are inline ids regardless of the
    // dictionary, long ones resolve only if present.
    virtual std::optional<ObjectId> find_string(std::string_view s) const = 0;
};

// Resolver over an in-memory dictionary (reference-graph evaluation).
class DictResolver final : public ConstantResolver {
public:
    explicit DictResolver(const ValueDict& dict) : dict_(dict) {}
    std::optional<ObjectId> find_named(std::string_view name) const override {
        if (auto off = dict_.lookup(name)) return ObjectId::named_node(*off);
        return std::nullopt;
    }
    std::optional<ObjectId> find_string(std::string_view s) const override {
        return encode_string_readonly(s, dict_);
    }

private:
    const ValueDict& dict_;
};

// AST to formal query: resolves constants, lowers label/property sugar to
// relation atoms, invents fresh variables (?_cN edges, ?_vN anonymous nodes,
// ?_tN types — never colliding with user variables), expands r? and r+,
// expands SELECT * to the user variables in first-appearance order, and
// fills the defaults (condition True, order empty, limit 0).
FormalQuery desugar(const QueryAst& ast, const ConstantResolver& resolver);

// One well-designedness violation, named for error messages.
struct WellDesignednessReport {
    std::string variable;
    std::string message;  // names the variable and the offending place
};

// Checks the two well-designedness conditions — (i) a variable inside an
// optionally-extending sub-pattern that also occurs outside that sub-pattern
// must occur in the required side; (ii) condition variables must occur in
// the pattern — plus the companion rule that selection and order variables
// occur in the pattern. Returns the first violation, or nothing.
std::optional<WellDesignednessReport> check_well_designed(const FormalQuery& query);

// Throwing form: WellDesignednessError with the report's message.
void ensure_well_designed(const FormalQuery& query);

}  // namespace mdb::query
