#include "mdb/query/ast.hpp"

namespace mdb::query {

RpqPtr make_rpq_type(std::string type_name) {
    auto node = std::make_unique<RpqNode>();
    node->kind = RpqNode::Kind::Type;
    node->type_name = std::move(type_name);
    return node;
}

RpqPtr make_rpq(RpqNode::Kind kind, RpqPtr left, RpqPtr right) {
    auto node = std::make_unique<RpqNode>();
    node->kind = kind;
    node->left = std::move(left);
    node->right = std::move(right);
    return node;
}

RpqPtr clone_rpq(const RpqNode& node) {
    auto copy = std::make_unique<RpqNode>();
    copy->kind = node.kind;
    copy->type_name = node.type_name;
    if (node.left) copy->left = clone_rpq(*node.left);
    if (node.right) copy->right = clone_rpq(*node.right);
    return copy;
}

bool rpq_equal(const RpqNode* a, const RpqNode* b) {
    if (a == nullptr || b == nullptr) return a == b;
    return a->kind == b->kind && a->type_name == b->type_name &&
           rpq_equal(a->left.get(), b->left.get()) && rpq_equal(a->right.get(), b->right.get());
}

bool atom_equal(const PatternAtom& a, const PatternAtom& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case PatternAtom::Kind::Node: return a.node == b.node;
        case PatternAtom::Kind::Edge:
            return a.source == b.source && a.target == b.target && a.edge == b.edge;
        case PatternAtom::Kind::Path:
            return a.source == b.source && a.target == b.target && a.path == b.path;
    }
    return false;
}

bool pattern_equal(const MatchPattern& a, const MatchPattern& b) {
    if (a.kind != b.kind) return false;
    if (a.kind == MatchPattern::Kind::Atoms) {
        if (a.atoms.size() != b.atoms.size()) return false;
        for (std::size_t i = 0; i < a.atoms.size(); ++i)
            if (!atom_equal(a.atoms[i], b.atoms[i])) return false;
        return true;
    }
    return pattern_equal(*a.outer, *b.outer) && pattern_equal(*a.inner, *b.inner);
}

std::string cmp_text(Cmp op) {
    switch (op) {
        case Cmp::Eq: return "==";
        case Cmp::Ne: return "!=";
        case Cmp::Lt: return "<";
        case Cmp::Le: return "<=";
        case Cmp::Gt: return ">";
        case Cmp::Ge: return ">=";
    }
    return "==";
}

bool condition_equal(const AstCondition* a, const AstCondition* b) {
    if (a == nullptr || b == nullptr) return a == b;
    return a->kind == b->kind && a->op == b->op && a->left_var == b->left_var &&
           a->right_var == b->right_var && a->left_key == b->left_key &&
           a->right_key == b->right_key && a->constant == b->constant &&
           condition_equal(a->left.get(), b->left.get()) &&
           condition_equal(a->right.get(), b->right.get());
}

bool query_equal(const QueryAst& a, const QueryAst& b) {
    return a.select_star == b.select_star && a.select == b.select &&
           pattern_equal(a.match, b.match) && condition_equal(a.where.get(), b.where.get()) &&
           a.order_by == b.order_by && a.limit == b.limit;
}

}  // namespace mdb::query
