#include "mdb/query/desugar.hpp"

#include <map>

#include "mdb/core/errors.hpp"

// Lowering from surface AST to the formal query tuple. All sugar disappears
// here: labels and inline property constraints become relation atoms, every
// anonymous position gets a fresh variable, string/name/integer constants
// are resolved to object ids, and r? / r+ expand structurally.
namespace mdb::query {

namespace {

class Desugarer {
public:
    Desugarer(const QueryAst& ast, const ConstantResolver& resolver)
        : ast_(ast), resolver_(resolver) {
        collect_used(ast_.match);
        if (ast_.where) collect_used(*ast_.where);
        for (const auto& e : ast_.select) used_.insert(e.var);
        for (const auto& k : ast_.order_by) used_.insert(k.element.var);
    }

    FormalQuery run() {
        FormalQuery q;
        q.pattern = lower_pattern(ast_.match);
        q.condition = ast_.where ? lower_condition(*ast_.where) : make_condition_true();
        if (ast_.select_star) {
            // Every user-written variable, in first-appearance order.
            for (const auto& var : appearance_order_) q.select.push_back({var, std::nullopt});
        } else {
            q.select = ast_.select;
        }
        for (const auto& k : ast_.order_by) q.order.push_back({k.element, k.descending});
        q.limit = ast_.limit.value_or(0);
        return q;
    }

private:
    // ---- fresh variables and constants -------------------------------------
    std::string fresh(const char* prefix, uint64_t& counter) {
        std::string name;
        do {
            name = std::string("?_") + prefix + std::to_string(counter++);
        } while (used_.count(name));
        used_.insert(name);
        return name;
    }

    // Constants that resolve to nothing stored get one sentinel id per
    // distinct spelling: never equal to any object, stable within the query.
    ObjectId sentinel(const std::string& spelling) {
        auto [it, inserted] = sentinels_.try_emplace(spelling, ObjectId());
        if (inserted) it->second = ObjectId(Tag::Invalid, next_sentinel_++);
        return it->second;
    }

    ObjectId resolve_name(const std::string& name) {
        if (auto id = resolver_.find_named(name)) return *id;
        return sentinel("n:" + name);
    }

    ObjectId resolve_string(const std::string& s) {
        if (auto id = resolver_.find_string(s)) return *id;
        return sentinel("s:" + s);
    }

    Term resolve_term(const AstTerm& term) {
        switch (term.kind) {
            case AstTerm::Kind::Variable: return Term::variable(term.text);
            case AstTerm::Kind::Name: return Term::object(resolve_name(term.text));
            case AstTerm::Kind::String: return Term::object(resolve_string(term.text));
            case AstTerm::Kind::Integer: return Term::object(ObjectId::inline_int(term.number));
            case AstTerm::Kind::Anonymous: return Term::variable(fresh("v", next_v_));
        }
        return Term::object(ObjectId());
    }

    // ---- pattern -----------------------------------------------------------
    PatternPtr lower_pattern(const MatchPattern& pattern) {
        if (pattern.kind == MatchPattern::Kind::Atoms) {
            BasicPattern block;
            for (const auto& atom : pattern.atoms) lower_atom(atom, block);
            return make_basic(std::move(block));
        }
        auto left = lower_pattern(*pattern.outer);
        auto right = lower_pattern(*pattern.inner);
        return make_compound(RelationalPattern::Kind::Opt, std::move(left), std::move(right));
    }

    void lower_atom(const PatternAtom& atom, BasicPattern& block) {
        switch (atom.kind) {
            case PatternAtom::Kind::Node: {
                Term t = lower_node(atom.node, block);
                if (atom.node.labels.empty() && atom.node.props.empty())
                    block.objects.push_back({t});
                break;
            }
            case PatternAtom::Kind::Edge: {
                EdgeRel rel;
                rel.source = lower_node(atom.source, block);
                rel.edge = Term::variable(atom.edge.edge_var ? *atom.edge.edge_var
                                                             : fresh("c", next_c_));
                if (atom.edge.type_name)
                    rel.type = Term::object(resolve_name(*atom.edge.type_name));
                else if (atom.edge.type_var)
                    rel.type = Term::variable(*atom.edge.type_var);
                else
                    rel.type = Term::variable(fresh("t", next_t_));
                rel.target = lower_node(atom.target, block);
                for (const auto& p : atom.edge.props)
                    block.props.push_back({rel.edge, resolve_string(p.key), resolve_term(p.value)});
                block.edges.push_back(std::move(rel));
                break;
            }
            case PatternAtom::Kind::Path: {
                PathRel rel;
                rel.source = lower_node(atom.source, block);
                rel.target = lower_node(atom.target, block);
                rel.path_var = atom.path.path_var;
                rel.rpq = lower_rpq(*atom.path.rpq);
                block.paths.push_back(std::move(rel));
                break;
            }
        }
    }

    // Lowers one parenthesized endpoint: the term itself, plus a Labels atom
    // per label and a Properties atom per inline constraint.
    Term lower_node(const AstNode& node, BasicPattern& block) {
        Term t = resolve_term(node.term);
        for (const auto& label : node.labels)
            block.labels.push_back({t, resolve_string(label)});
        for (const auto& p : node.props)
            block.props.push_back({t, resolve_string(p.key), resolve_term(p.value)});
        return t;
    }

    RpqExprPtr lower_rpq(const RpqNode& n) {
        switch (n.kind) {
            case RpqNode::Kind::Type: return make_path_type(resolve_name(n.type_name));
            case RpqNode::Kind::Concat:
                return make_path(Rpq::Kind::Concat, lower_rpq(*n.left), lower_rpq(*n.right));
            case RpqNode::Kind::Alternation:
                return make_path(Rpq::Kind::Alternation, lower_rpq(*n.left), lower_rpq(*n.right));
            case RpqNode::Kind::Inverse:
                return make_path(Rpq::Kind::Inverse, lower_rpq(*n.left));
            case RpqNode::Kind::Star: return make_path(Rpq::Kind::Star, lower_rpq(*n.left));
            case RpqNode::Kind::Plus:  // r+ = r / r*
                return make_path(Rpq::Kind::Concat, lower_rpq(*n.left),
                                 make_path(Rpq::Kind::Star, lower_rpq(*n.left)));
            case RpqNode::Kind::Maybe:  // r? = epsilon | r
                return make_path(Rpq::Kind::Alternation, make_path_epsilon(), lower_rpq(*n.left));
        }
        return make_path_epsilon();
    }

    // ---- condition ---------------------------------------------------------
    ConditionPtr lower_condition(const AstCondition& c) {
        auto node = std::make_unique<Condition>();
        node->op = c.op;
        switch (c.kind) {
            case AstCondition::Kind::VarVsVar:
                node->kind = Condition::Kind::VarEqVar;
                node->left_var = c.left_var;
                node->right_var = c.right_var;
                node->op = Cmp::Eq;
                return maybe_negate(std::move(node), c.op);
            case AstCondition::Kind::VarVsConst:
                node->kind = Condition::Kind::VarEqConst;
                node->left_var = c.left_var;
                node->constant = resolve_constant(c.constant);
                node->op = Cmp::Eq;
                return maybe_negate(std::move(node), c.op);
            case AstCondition::Kind::PropVsProp:
                node->kind = Condition::Kind::PropCmpProp;
                node->left_var = c.left_var;
                node->left_key = c.left_key;
                node->right_var = c.right_var;
                node->right_key = c.right_key;
                return node;
            case AstCondition::Kind::PropVsConst:
                node->kind = Condition::Kind::PropCmpConst;
                node->left_var = c.left_var;
                node->left_key = c.left_key;
                node->constant = resolve_constant(c.constant);
                return node;
            case AstCondition::Kind::Not:
                node->kind = Condition::Kind::Not;
                node->left = lower_condition(*c.left);
                return node;
            case AstCondition::Kind::And:
            case AstCondition::Kind::Or:
                node->kind = c.kind == AstCondition::Kind::And ? Condition::Kind::And
                                                               : Condition::Kind::Or;
                node->left = lower_condition(*c.left);
                node->right = lower_condition(*c.right);
                return node;
        }
        return node;
    }

    // Surface != on variable comparisons is negation of the equality atom.
    ConditionPtr maybe_negate(ConditionPtr atom, Cmp surface_op) {
        if (surface_op == Cmp::Eq) return atom;
        return make_condition(Condition::Kind::Not, std::move(atom));
    }

    ObjectId resolve_constant(const AstTerm& term) {
        switch (term.kind) {
            case AstTerm::Kind::Name: return resolve_name(term.text);
            case AstTerm::Kind::String: return resolve_string(term.text);
            case AstTerm::Kind::Integer: return ObjectId::inline_int(term.number);
            default: return ObjectId();
        }
    }

    // ---- bookkeeping -------------------------------------------------------
    void note_user_var(const std::string& var) {
        used_.insert(var);
        if (seen_in_order_.insert(var).second) appearance_order_.push_back(var);
    }

    void collect_used(const MatchPattern& pattern) {
        if (pattern.kind == MatchPattern::Kind::Atoms) {
            for (const auto& atom : pattern.atoms) {
                switch (atom.kind) {
                    case PatternAtom::Kind::Node: note_term(atom.node.term); break;
                    case PatternAtom::Kind::Edge:
                        note_term(atom.source.term);
                        if (atom.edge.edge_var) note_user_var(*atom.edge.edge_var);
                        if (atom.edge.type_var) note_user_var(*atom.edge.type_var);
                        note_term(atom.target.term);
                        break;
                    case PatternAtom::Kind::Path:
                        note_term(atom.source.term);
                        if (atom.path.path_var) note_user_var(*atom.path.path_var);
                        note_term(atom.target.term);
                        break;
                }
            }
            return;
        }
        collect_used(*pattern.outer);
        collect_used(*pattern.inner);
    }

    void note_term(const AstTerm& term) {
        if (term.kind == AstTerm::Kind::Variable) note_user_var(term.text);
    }

    void collect_used(const AstCondition& c) {
        if (!c.left_var.empty()) used_.insert(c.left_var);
        if (!c.right_var.empty()) used_.insert(c.right_var);
        if (c.left) collect_used(*c.left);
        if (c.right) collect_used(*c.right);
    }

    const QueryAst& ast_;
    const ConstantResolver& resolver_;
    std::set<std::string> used_;           // every variable name, user or fresh
    std::set<std::string> seen_in_order_;  // user pattern variables already listed
    std::vector<std::string> appearance_order_;
    std::map<std::string, ObjectId> sentinels_;
    uint64_t next_c_ = 0, next_v_ = 0, next_t_ = 0, next_sentinel_ = 1;
};

// Walks every optionally-extending node; for each, variables of the inner
// side that also occur outside the node must occur in the required side.
class WellDesignedChecker {
public:
    explicit WellDesignedChecker(const FormalQuery& query) : query_(query) {}

    std::optional<WellDesignednessReport> run() {
        const RelationalPattern& root = *query_.pattern;
        auto all = pattern_vars(root);
        for (const auto& e : query_.select)
            if (!all.count(e.var))
                return WellDesignednessReport{
                    e.var, "selection variable " + e.var + " does not occur in the match pattern"};
        for (const auto& k : query_.order)
            if (!all.count(k.element.var))
                return WellDesignednessReport{
                    k.element.var,
                    "order variable " + k.element.var + " does not occur in the match pattern"};
        for (const auto& v : condition_vars(*query_.condition))
            if (!all.count(v))
                return WellDesignednessReport{
                    v, "condition variable " + v + " does not occur in the match pattern"};
        return check_node(root, root);
    }

private:
    std::optional<WellDesignednessReport> check_node(const RelationalPattern& root,
                                                     const RelationalPattern& node) {
        if (node.kind == RelationalPattern::Kind::Basic) return std::nullopt;
        if (node.kind == RelationalPattern::Kind::Opt) {
            auto required = pattern_vars(*node.left);
            auto extension = pattern_vars(*node.right);
            std::set<std::string> outside;
            collect_outside(root, node, outside);
            for (const auto& v : extension) {
                if (!required.count(v) && outside.count(v))
                    return WellDesignednessReport{
                        v, "variable " + v +
                               " occurs in an optional extension and outside it, but not in the "
                               "required side of that extension"};
            }
        }
        if (auto r = check_node(root, *node.left)) return r;
        return check_node(root, *node.right);
    }

    // Variables of the tree excluding one subtree.
    static void collect_outside(const RelationalPattern& node, const RelationalPattern& skip,
                                std::set<std::string>& out) {
        if (&node == &skip) return;
        if (node.kind == RelationalPattern::Kind::Basic) {
            collect_vars(node.basic, out);
            return;
        }
        collect_outside(*node.left, skip, out);
        collect_outside(*node.right, skip, out);
    }

    const FormalQuery& query_;
};

}  // namespace

FormalQuery desugar(const QueryAst& ast, const ConstantResolver& resolver) {
    return Desugarer(ast, resolver).run();
}

std::optional<WellDesignednessReport> check_well_designed(const FormalQuery& query) {
    return WellDesignedChecker(query).run();
}

void ensure_well_designed(const FormalQuery& query) {
    if (auto report = check_well_designed(query)) throw WellDesignednessError(report->message);
}

}  // namespace mdb::query
