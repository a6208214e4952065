#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "mdb/core/errors.hpp"
#include "mdb/ingest/import.hpp"

namespace mdb {

namespace {

// Shared id resolution for one import run.
struct Resolver {
    ValueDict& dict;
    std::unordered_map<std::string, ObjectId> anon_ids;
    std::unordered_map<std::string, ObjectId> alias_ids;

    ObjectId resolve(const ImportTerm& t) {
        switch (t.kind) {
            case ImportTerm::Kind::Name:
                return ObjectId::named_node(dict.intern(t.text));
            case ImportTerm::Kind::AnonName:
                return anon_ids.try_emplace(t.text, ObjectId::anon_node(anon_ids.size()))
                    .first->second;
            case ImportTerm::Kind::AliasRef:
                return alias_ids.at(t.text);  // parser guarantees declaration
            case ImportTerm::Kind::Quoted:
                return encode_string(t.text, dict);
            case ImportTerm::Kind::Integer:
                return encode_int(t.number);
        }
        throw Error("unreachable term kind");
    }
};

}  // namespace

ReferenceGraph build_import_graph(const std::vector<ImportStatement>& stmts, ValueDict& dict) {
    ReferenceGraph g;
    Resolver r{dict, {}, {}};
    for (const ImportStatement& stmt : stmts) {
        try {
            ObjectId subject = r.resolve(stmt.subject);
            if (stmt.kind == ImportStatement::Kind::Edge) {
                ObjectId type = r.resolve(stmt.type);
                ObjectId target = r.resolve(stmt.target);
                subject = g.add_edge(subject, type, target);  // props attach to the edge
                if (!stmt.alias.empty()) r.alias_ids.emplace(stmt.alias, subject);
            } else if (stmt.labels.empty() && stmt.props.empty()) {
                g.add_object(subject);
            }
            for (const std::string& label : stmt.labels)
                g.add_label(subject, encode_string(label, dict));
            for (const auto& [key, value] : stmt.props)
                g.set_prop(subject, encode_string(key, dict), r.resolve(value));
        } catch (const PropertyConflictError& e) {
            throw ImportError(std::size_t(stmt.line), e.what());
        }
    }
    return g;
}

std::string ImportStats::to_json() const {
    nlohmann::json j{{"objects", objects},
                     {"edges", edges},
                     {"labels", labels},
                     {"properties", properties}};
    return j.dump();
}

namespace {

const char* kDatabaseFiles[] = {"catalog.json", "objects.of",   "edges.et",
                                "objects.bt",   "dg_stye.bt",   "dg_tyse.bt",
                                "dg_yste.bt",   "dg_ytse.bt",   "labels_ol.bt",
                                "labels_lo.bt", "props_opv.bt", "props_pvo.bt"};

void remove_partial(const std::filesystem::path& dir, bool existed_before) {
    std::error_code ec;
    if (!existed_before) {
        std::filesystem::remove_all(dir, ec);
        return;
    }
    // The directory predates the import: remove only the database files.
    for (const char* f : kDatabaseFiles) std::filesystem::remove(dir / f, ec);
}

}  // namespace

ImportStats import_text(std::string_view text, const std::filesystem::path& dir,
                        const DatabaseOptions& opts) {
    std::vector<ImportStatement> stmts = parse_import(text);  // before touching disk

    bool existed_before = std::filesystem::exists(dir);
    std::unique_ptr<Database> db = Database::create(dir, opts);
    try {
        ReferenceGraph g = build_import_graph(stmts, db->names());
        db->store_graph(g);
        db->flush();
    } catch (...) {
        db.reset();
        remove_partial(dir, existed_before);
        throw;
    }
    const Catalog& c = db->catalog();
    return {c.object_count, c.edge_count, c.label_pair_count, c.prop_pair_count};
}

ImportStats import_file(const std::filesystem::path& file, const std::filesystem::path& dir,
                        const DatabaseOptions& opts) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw StorageError("cannot read '" + file.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return import_text(buf.str(), dir, opts);
}

namespace {

// Serialization helpers for export_text.

std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default: out.push_back(c);
        }
    }
    out.push_back('"');
    return out;
}

struct Exporter {
    Database& db;

    std::string term(ObjectId id) const {
        switch (id.tag()) {
            case Tag::NamedNode: return db.names().resolve(id.payload());
            case Tag::AnonNode: return "_a" + std::to_string(id.payload());
            case Tag::Edge: return "_e" + std::to_string(id.payload());
            case Tag::InlineString: return quote(id.inline_chars());
            case Tag::ExternalString: return quote(db.names().resolve(id.payload()));
            case Tag::InlineInt: return std::to_string(id.int_value());
            default: throw Error("cannot serialize id");
        }
    }

    // Decoded string content for canonical ordering of labels and keys.
    std::string content(ObjectId id) const {
        if (id.tag() == Tag::InlineString) return id.inline_chars();
        if (id.tag() == Tag::ExternalString) return db.names().resolve(id.payload());
        return term(id);
    }

    std::string props_block(const std::map<std::string, ObjectId>& props) const {
        std::string out = " {";
        bool first = true;
        for (const auto& [key, value] : props) {
            if (!first) out += ", ";
            first = false;
            out += key + " : " + term(value);
        }
        out += "}";
        return out;
    }
};

}  // namespace

std::string export_text(Database& db) {
    Exporter ex{db};
    ReferenceGraph g = mirror_database(db);
    std::string out;

    // Annotations grouped per carrier, keys/labels ordered by content.
    std::map<ObjectId, std::map<std::string, ObjectId>> props_of;
    for (const auto& [ok, value] : g.props()) props_of[ok.first][ex.content(ok.second)] = value;
    std::map<ObjectId, std::vector<std::string>> labels_of;
    for (const auto& [object, label] : g.labels())
        labels_of[object].push_back(ex.content(label));
    for (auto& [object, ls] : labels_of) std::sort(ls.begin(), ls.end());

    // Edge statements in id order; edge props ride along.
    for (const EdgeRecord& e : g.edges()) {
        out += "_e" + std::to_string(e.eid.payload()) + " = (" + ex.term(e.source) + ")-[" +
               ex.term(e.type) + "]->(" + ex.term(e.target) + ")";
        if (auto it = props_of.find(e.eid); it != props_of.end()) {
            out += ex.props_block(it->second);
            props_of.erase(it);
        }
        out += "\n";
    }

    // Node statements for everything still carrying labels or props
    // (nodes, and edges with labels), ordered by id.
    std::set<ObjectId> carriers;
    for (const auto& [object, ls] : labels_of) carriers.insert(object);
    for (const auto& [object, ps] : props_of) carriers.insert(object);
    for (ObjectId o : carriers) {
        out += "(" + (o.is_edge() ? "_e" + std::to_string(o.payload()) : ex.term(o)) + ")";
        if (auto it = labels_of.find(o); it != labels_of.end())
            for (const std::string& l : it->second) out += " :" + l;
        if (auto it = props_of.find(o); it != props_of.end()) out += ex.props_block(it->second);
        out += "\n";
    }

    // Bare objects: mentioned nowhere else, nodes only.
    std::set<ObjectId> mentioned;
    for (const EdgeRecord& e : g.edges()) {
        mentioned.insert(e.source);
        mentioned.insert(e.type);
        mentioned.insert(e.target);
        mentioned.insert(e.eid);
    }
    for (const auto& [object, label] : g.labels()) {
        mentioned.insert(object);
        mentioned.insert(label);
    }
    for (const auto& [ok, value] : g.props()) {
        mentioned.insert(ok.first);
        mentioned.insert(ok.second);
        mentioned.insert(value);
    }
    for (ObjectId o : g.objects())
        if (!mentioned.count(o) && o.is_node()) out += "(" + ex.term(o) + ")\n";

    return out;
}

}  // namespace mdb
