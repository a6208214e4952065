#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mdb/core/reference_graph.hpp"
#include "mdb/core/value.hpp"
#include "mdb/storage/database.hpp"

// Text graph format and its importer/exporter. The format is line oriented,
// one statement per line, '#' starts a comment:
//
//   node_stmt := '(' name ')' (':' label)* props?
//   edge_stmt := (alias '=')? '(' term ')' '-[' term ']->' '(' term ')' props?
//   term      := name | alias | quoted-string | integer
//   props     := '{' key ':' value (',' key ':' value)* '}'
//
// Names (and property keys) may contain spaces. A name starting with '_' is
// either a reference to a previously declared edge alias or an anonymous
// node; all other names are named nodes. Quoted strings and integers are
// value objects. Labels and keys are interned like string values. Each edge
// statement creates a new edge (its id is the statement's position among
// edge statements); props on an edge statement annotate the edge object.
// An alias must be declared before any use and at most once.
namespace mdb {

struct ImportTerm {
    enum class Kind { Name, AliasRef, AnonName, Quoted, Integer };
    Kind kind = Kind::Name;
    std::string text;    // name, alias, or string content
    int64_t number = 0;  // Kind::Integer only
};

struct ImportStatement {
    enum class Kind { Node, Edge };
    Kind kind = Kind::Node;
    int line = 0;
    std::string alias;                 // edge statements; empty when absent
    ImportTerm subject, type, target;  // node statements fill subject only
    std::vector<std::string> labels;
    std::vector<std::pair<std::string, ImportTerm>> props;
};

// Parses and validates alias discipline; no ids are assigned yet.
std::vector<ImportStatement> parse_import(std::string_view text);

// Replays parsed statements into a reference graph, minting ids through
// dict (named nodes and long strings are interned in first-mention order,
// anonymous ordinals and edge ids count up from zero in statement order).
ReferenceGraph build_import_graph(const std::vector<ImportStatement>& stmts, ValueDict& dict);

struct ImportStats {
    uint64_t objects = 0;
    uint64_t edges = 0;
    uint64_t labels = 0;
    uint64_t properties = 0;
    std::string to_json() const;  // one-line JSON object
};

// Imports into a fresh database directory. All-or-nothing: on any error the
// partially written database is removed (a directory that existed before is
// kept, only the database files inside it are deleted).
ImportStats import_text(std::string_view text, const std::filesystem::path& dir,
                        const DatabaseOptions& opts = {});
ImportStats import_file(const std::filesystem::path& file, const std::filesystem::path& dir,
                        const DatabaseOptions& opts = {});

// Serializes a whole database back to import text: edge statements in id
// order (every edge aliased as _eN), then node statements for remaining
// label/property carriers and bare objects. Importing the export yields an
// isomorphic database, and exporting that yields identical text.
std::string export_text(Database& db);

}  // namespace mdb
