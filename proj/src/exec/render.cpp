#include "mdb/exec/render.hpp"

namespace mdb::exec {

namespace {

std::string render_plain(ObjectId id, Database& db) {
    switch (id.tag()) {
        case Tag::NamedNode:
            return db.names().resolve(id.payload());
        case Tag::AnonNode:
            return "_a" + std::to_string(id.payload());
        case Tag::Edge:
            return "_e" + std::to_string(id.payload());
        case Tag::InlineString:
        case Tag::ExternalString:
            return '"' + std::get<std::string>(decode_value(id, db.names())) + '"';
        case Tag::InlineInt:
            return std::to_string(id.int_value());
        case Tag::Transient:
            return "_t" + std::to_string(id.payload());
        case Tag::Invalid:
            break;
    }
    return "_u" + std::to_string(id.payload());
}

std::string render_witness(const algebra::PathWitness& w, Database& db) {
    std::string out = "(" + render_plain(w.objects.front(), db) + ")";
    for (std::size_t i = 0; i < w.edges.size(); ++i) {
        ObjectId e = w.edges[i];
        auto rec = db.edge_lookup(e);
        bool forward = rec.source == w.objects[i] && rec.target == w.objects[i + 1];
        out += "-[" + render_plain(e, db) + (forward ? ",f" : ",b") + "]->";
        out += "(" + render_plain(w.objects[i + 1], db) + ")";
    }
    return out;
}

}  // namespace

std::string render_value(ObjectId id, Database& db, const algebra::WitnessTable* witnesses) {
    if (witnesses && id.tag() == Tag::Transient) {
        if (const auto* w = witnesses->find(id)) return render_witness(*w, db);
    }
    return render_plain(id, db);
}

}  // namespace mdb::exec
