#include "mdb/query/query.hpp"

namespace mdb::query {

RpqExprPtr make_path_epsilon() {
    auto node = std::make_unique<Rpq>();
    node->kind = Rpq::Kind::Epsilon;
    return node;
}

RpqExprPtr make_path_type(ObjectId type) {
    auto node = std::make_unique<Rpq>();
    node->kind = Rpq::Kind::Type;
    node->type = type;
    return node;
}

RpqExprPtr make_path(Rpq::Kind kind, RpqExprPtr left, RpqExprPtr right) {
    auto node = std::make_unique<Rpq>();
    node->kind = kind;
    node->left = std::move(left);
    node->right = std::move(right);
    return node;
}

RpqExprPtr clone_path(const Rpq& node) {
    auto copy = std::make_unique<Rpq>();
    copy->kind = node.kind;
    copy->type = node.type;
    if (node.left) copy->left = clone_path(*node.left);
    if (node.right) copy->right = clone_path(*node.right);
    return copy;
}

bool path_equal(const Rpq* a, const Rpq* b) {
    if (a == nullptr || b == nullptr) return a == b;
    return a->kind == b->kind && a->type == b->type && path_equal(a->left.get(), b->left.get()) &&
           path_equal(a->right.get(), b->right.get());
}

PatternPtr make_basic(BasicPattern block) {
    auto node = std::make_unique<RelationalPattern>();
    node->kind = RelationalPattern::Kind::Basic;
    node->basic = std::move(block);
    return node;
}

PatternPtr make_compound(RelationalPattern::Kind kind, PatternPtr left, PatternPtr right) {
    auto node = std::make_unique<RelationalPattern>();
    node->kind = kind;
    node->left = std::move(left);
    node->right = std::move(right);
    return node;
}

ConditionPtr make_condition_true() {
    auto node = std::make_unique<Condition>();
    node->kind = Condition::Kind::True;
    return node;
}

ConditionPtr make_condition(Condition::Kind kind, ConditionPtr left, ConditionPtr right) {
    auto node = std::make_unique<Condition>();
    node->kind = kind;
    node->left = std::move(left);
    node->right = std::move(right);
    return node;
}

namespace {

void note_term(const Term& term, std::set<std::string>& out) {
    if (term.is_var) out.insert(term.var);
}

}  // namespace

void collect_vars(const BasicPattern& block, std::set<std::string>& out) {
    for (const auto& a : block.objects) note_term(a.object, out);
    for (const auto& a : block.labels) note_term(a.object, out);
    for (const auto& a : block.props) {
        note_term(a.object, out);
        note_term(a.value, out);
    }
    for (const auto& a : block.edges) {
        note_term(a.source, out);
        note_term(a.type, out);
        note_term(a.target, out);
        note_term(a.edge, out);
    }
    for (const auto& a : block.paths) {
        note_term(a.source, out);
        note_term(a.target, out);
        if (a.path_var) out.insert(*a.path_var);
    }
}

std::set<std::string> pattern_vars(const RelationalPattern& pattern) {
    std::set<std::string> out;
    if (pattern.kind == RelationalPattern::Kind::Basic) {
        collect_vars(pattern.basic, out);
        return out;
    }
    out = pattern_vars(*pattern.left);
    auto right = pattern_vars(*pattern.right);
    out.insert(right.begin(), right.end());
    return out;
}

std::set<std::string> condition_vars(const Condition& condition) {
    std::set<std::string> out;
    switch (condition.kind) {
        case Condition::Kind::True: break;
        case Condition::Kind::VarEqVar:
            out.insert(condition.left_var);
            out.insert(condition.right_var);
            break;
        case Condition::Kind::VarEqConst: out.insert(condition.left_var); break;
        case Condition::Kind::PropCmpProp:
            out.insert(condition.left_var);
            out.insert(condition.right_var);
            break;
        case Condition::Kind::PropCmpConst: out.insert(condition.left_var); break;
        case Condition::Kind::Not:
        case Condition::Kind::And:
        case Condition::Kind::Or: {
            if (condition.left) {
                auto l = condition_vars(*condition.left);
                out.insert(l.begin(), l.end());
            }
            if (condition.right) {
                auto r = condition_vars(*condition.right);
                out.insert(r.begin(), r.end());
            }
            break;
        }
    }
    return out;
}

}  // namespace mdb::query
