#include <cctype>
#include <set>
#include <string>

#include "mdb/core/errors.hpp"
#include "mdb/ingest/import.hpp"

namespace mdb {

namespace {

// Cursor over one physical line.
struct LineScanner {
    std::string_view s;
    std::size_t pos = 0;
    int line;

    explicit LineScanner(std::string_view text, int line_no) : s(text), line(line_no) {}

    [[noreturn]] void fail(const std::string& what) const {
        throw ImportError(line, what + " (column " + std::to_string(pos + 1) + ")");
    }

    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    bool at_end() {
        skip_ws();
        return pos >= s.size();
    }
    char peek() const { return pos < s.size() ? s[pos] : '\0'; }
    bool consume(char c) {
        skip_ws();
        if (peek() != c) return false;
        ++pos;
        return true;
    }
    void expect(char c, const char* context) {
        if (!consume(c)) fail(std::string("expected '") + c + "' " + context);
    }
    bool consume_arrow_open() {  //  -[
        skip_ws();
        if (pos + 1 < s.size() && s[pos] == '-' && s[pos + 1] == '[') {
            pos += 2;
            return true;
        }
        return false;
    }
    void expect_arrow_close() {  //  ]->
        skip_ws();
        if (pos + 2 < s.size() && s[pos] == ']' && s[pos + 1] == '-' && s[pos + 2] == '>') {
            pos += 3;
            return;
        }
        fail("expected ']->' after the edge type");
    }

    // Raw run up to (not including) any of the stop characters, trimmed.
    std::string until(std::string_view stops, const char* what) {
        skip_ws();
        std::size_t start = pos;
        while (pos < s.size() && stops.find(s[pos]) == std::string_view::npos) ++pos;
        std::size_t end = pos;
        while (end > start && std::isspace(static_cast<unsigned char>(s[end - 1]))) --end;
        if (end == start) fail(std::string("expected ") + what);
        return std::string(s.substr(start, end - start));
    }

    std::string quoted_string() {
        ++pos;  // opening quote already seen
        std::string out;
        while (pos < s.size()) {
            char c = s[pos++];
            if (c == '"') return out;
            if (c == '\\') {
                if (pos >= s.size()) fail("dangling escape in string");
                char e = s[pos++];
                switch (e) {
                    case '"': out.push_back('"'); break;
                    case '\\': out.push_back('\\'); break;
                    case 'n': out.push_back('\n'); break;
                    case 't': out.push_back('\t'); break;
                    default: fail(std::string("unknown escape '\\") + e + "'");
                }
            } else {
                out.push_back(c);
            }
        }
        fail("unterminated string");
    }
};

bool is_integer_token(std::string_view t) {
    std::size_t i = (t[0] == '+' || t[0] == '-') ? 1 : 0;
    if (i >= t.size()) return false;
    for (; i < t.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(t[i]))) return false;
    return true;
}

void validate_name(LineScanner& sc, const std::string& name) {
    for (char c : name)
        if (c == '(' || c == ')' || c == '[' || c == ']' || c == '{' || c == '}' || c == '"')
            sc.fail("name contains reserved character '" + std::string(1, c) + "'");
}

// Tracks alias discipline across the whole file.
struct AliasTable {
    std::set<std::string> declared;
    std::set<std::string> used_plain;

    ImportTerm classify(LineScanner& sc, std::string name) {
        validate_name(sc, name);
        ImportTerm t;
        t.text = std::move(name);
        if (declared.count(t.text)) {
            t.kind = ImportTerm::Kind::AliasRef;
        } else {
            t.kind = t.text[0] == '_' ? ImportTerm::Kind::AnonName : ImportTerm::Kind::Name;
            used_plain.insert(t.text);
        }
        return t;
    }

    void declare(int line, const std::string& alias) {
        if (declared.count(alias))
            throw DuplicateAliasError(line, "alias '" + alias + "' is declared twice");
        if (used_plain.count(alias))
            throw UndeclaredAliasError(line, "alias '" + alias +
                                                 "' was used before its declaration");
        declared.insert(alias);
    }
};

// term inside '(' ... ')' or '[' ... ']'.
ImportTerm parse_term(LineScanner& sc, AliasTable& aliases, char closer) {
    sc.skip_ws();
    ImportTerm t;
    if (sc.peek() == '"') {
        t.kind = ImportTerm::Kind::Quoted;
        t.text = sc.quoted_string();
        return t;
    }
    std::string stops(1, closer);
    std::string tok = sc.until(stops, "a term");
    if (is_integer_token(tok)) {
        t.kind = ImportTerm::Kind::Integer;
        try {
            t.number = std::stoll(tok);
        } catch (const std::out_of_range&) {
            sc.fail("integer '" + tok + "' does not fit");
        }
        t.text = tok;
        return t;
    }
    return aliases.classify(sc, std::move(tok));
}

std::vector<std::pair<std::string, ImportTerm>> parse_props(LineScanner& sc) {
    std::vector<std::pair<std::string, ImportTerm>> out;
    sc.expect('{', "to open properties");
    if (sc.consume('}')) return out;  // empty block
    while (true) {
        std::string key = sc.until(":", "a property key");
        validate_name(sc, key);
        sc.expect(':', "between key and value");
        sc.skip_ws();
        ImportTerm value;
        if (sc.peek() == '"') {
            value.kind = ImportTerm::Kind::Quoted;
            value.text = sc.quoted_string();
        } else {
            std::string tok = sc.until(",}", "a property value");
            if (!is_integer_token(tok))
                sc.fail("property value must be a quoted string or an integer");
            value.kind = ImportTerm::Kind::Integer;
            try {
                value.number = std::stoll(tok);
            } catch (const std::out_of_range&) {
                sc.fail("integer '" + tok + "' does not fit");
            }
            value.text = tok;
        }
        out.emplace_back(std::move(key), std::move(value));
        if (sc.consume('}')) return out;
        sc.expect(',', "between properties");
    }
}

}  // namespace

std::vector<ImportStatement> parse_import(std::string_view text) {
    std::vector<ImportStatement> out;
    AliasTable aliases;

    int line_no = 0;
    std::size_t offset = 0;
    while (offset <= text.size()) {
        std::size_t eol = text.find('\n', offset);
        std::string_view line = text.substr(
            offset, eol == std::string_view::npos ? std::string_view::npos : eol - offset);
        ++line_no;
        offset = eol == std::string_view::npos ? text.size() + 1 : eol + 1;

        // Strip comments ('#' outside quotes).
        bool in_quotes = false;
        std::size_t cut = line.size();
        for (std::size_t i = 0; i < line.size(); ++i) {
            if (line[i] == '"' && (i == 0 || line[i - 1] != '\\')) in_quotes = !in_quotes;
            else if (line[i] == '#' && !in_quotes) {
                cut = i;
                break;
            }
        }
        LineScanner sc(line.substr(0, cut), line_no);
        if (sc.at_end()) continue;

        ImportStatement stmt;
        stmt.line = line_no;

        if (sc.peek() != '(') {  // alias '=' prefix
            stmt.alias = sc.until("=(", "a statement");
            validate_name(sc, stmt.alias);
            sc.expect('=', "after the alias name");
        }
        sc.expect('(', "to open the subject");
        stmt.subject = parse_term(sc, aliases, ')');
        sc.expect(')', "to close the subject");

        if (sc.consume_arrow_open()) {
            stmt.kind = ImportStatement::Kind::Edge;
            stmt.type = parse_term(sc, aliases, ']');
            sc.expect_arrow_close();
            sc.expect('(', "to open the target");
            stmt.target = parse_term(sc, aliases, ')');
            sc.expect(')', "to close the target");
            if (!sc.at_end() && sc.peek() == '{') stmt.props = parse_props(sc);
            if (!stmt.alias.empty()) aliases.declare(line_no, stmt.alias);
        } else {
            if (!stmt.alias.empty())
                sc.fail("only edge statements may declare an alias");
            stmt.kind = ImportStatement::Kind::Node;
            if (stmt.subject.kind == ImportTerm::Kind::Quoted ||
                stmt.subject.kind == ImportTerm::Kind::Integer)
                sc.fail("a node statement subject must be a name");
            while (sc.consume(':')) {
                std::string label = sc.until(":{", "a label");
                validate_name(sc, label);
                stmt.labels.push_back(std::move(label));
            }
            if (!sc.at_end() && sc.peek() == '{') stmt.props = parse_props(sc);
        }
        if (!sc.at_end()) sc.fail("unexpected trailing text");
        out.push_back(std::move(stmt));
    }
    return out;
}

}  // namespace mdb
