#pragma once

#include <string>

#include "mdb/core/reference_graph.hpp"
#include "mdb/core/value.hpp"

// Hand-built copies of the two worked example graphs, used by tests that
// need known data without going through the import pipeline. The import
// fixture files under fixtures/ describe the same graphs.
namespace mdb::testing {

struct FamilyGraph {
    InMemoryDict dict;
    ReferenceGraph g;
    ObjectId n1, n2, father, child, human;
    ObjectId e1, e2;
    ObjectId k_gender, k_children, k_first_name, k_last_name, k_death, k_order;
    ObjectId v_female, v_male, v2, v3, v_michelle, v_alberto, v_bachelet, v_death_date;

    FamilyGraph() { build(dict); }
    explicit FamilyGraph(ValueDict& d) { build(d); }

private:
    void build(ValueDict& dict) {
        n1 = ObjectId::named_node(dict.intern("n1"));
        n2 = ObjectId::named_node(dict.intern("n2"));
        father = ObjectId::named_node(dict.intern("father"));
        child = ObjectId::named_node(dict.intern("child"));
        human = encode_string("human", dict);
        k_gender = encode_string("gender", dict);
        k_children = encode_string("children", dict);
        k_first_name = encode_string("first name", dict);
        k_last_name = encode_string("last name", dict);
        k_death = encode_string("death", dict);
        k_order = encode_string("order", dict);
        v_female = encode_string("female", dict);
        v_male = encode_string("male", dict);
        v2 = encode_string("2", dict);
        v3 = encode_string("3", dict);
        v_michelle = encode_string("Michelle", dict);
        v_alberto = encode_string("Alberto", dict);
        v_bachelet = encode_string("Bachelet", dict);
        v_death_date = encode_string("12 March 1974", dict);

        g.add_label(n1, human);
        g.set_prop(n1, k_gender, v_female);
        g.set_prop(n1, k_children, v3);
        g.set_prop(n1, k_first_name, v_michelle);
        g.set_prop(n1, k_last_name, v_bachelet);
        g.add_label(n2, human);
        g.set_prop(n2, k_gender, v_male);
        g.set_prop(n2, k_children, v2);
        g.set_prop(n2, k_first_name, v_alberto);
        g.set_prop(n2, k_last_name, v_bachelet);
        g.set_prop(n2, k_death, v_death_date);
        e1 = g.add_edge(n1, father, n2);
        e2 = g.add_edge(n2, child, n1);
        g.set_prop(e2, k_order, v2);
    }
};

struct PositionsGraph {
    InMemoryDict dict;
    ReferenceGraph g;
    ObjectId mb, poc, pinera, lagos;
    ObjectId t_position_held, t_start_date, t_end_date, t_replaces, t_replaced_by;
    ObjectId d2014, d2018, d2006, d2010;
    ObjectId e1, e2;

    PositionsGraph() { build(dict); }
    explicit PositionsGraph(ValueDict& d) { build(d); }

private:
    void build(ValueDict& dict) {
        mb = ObjectId::named_node(dict.intern("Michelle Bachelet"));
        poc = ObjectId::named_node(dict.intern("President of Chile"));
        pinera = ObjectId::named_node(dict.intern("Sebastián Piñera"));
        lagos = ObjectId::named_node(dict.intern("Ricardo Lagos"));
        t_position_held = ObjectId::named_node(dict.intern("position held"));
        t_start_date = ObjectId::named_node(dict.intern("start date"));
        t_end_date = ObjectId::named_node(dict.intern("end date"));
        t_replaces = ObjectId::named_node(dict.intern("replaces"));
        t_replaced_by = ObjectId::named_node(dict.intern("replaced by"));
        d2014 = encode_string("2014-03-11", dict);
        d2018 = encode_string("2018-03-11", dict);
        d2006 = encode_string("2006-03-11", dict);
        d2010 = encode_string("2010-03-11", dict);

        e1 = g.add_edge(mb, t_position_held, poc);
        g.add_edge(e1, t_start_date, d2014);
        g.add_edge(e1, t_end_date, d2018);
        g.add_edge(e1, t_replaces, pinera);
        g.add_edge(e1, t_replaced_by, pinera);
        e2 = g.add_edge(mb, t_position_held, poc);
        g.add_edge(e2, t_start_date, d2006);
        g.add_edge(e2, t_end_date, d2010);
        g.add_edge(e2, t_replaces, lagos);
        g.add_edge(e2, t_replaced_by, pinera);
    }
};

}  // namespace mdb::testing
