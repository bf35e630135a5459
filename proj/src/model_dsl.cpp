#include "revsem/model_dsl.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>
#include <set>
#include <sstream>

#include "revsem/errors.hpp"

namespace revsem {

ExprPtr Expr::make_ref(std::string n) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::ref;
    e->name = std::move(n);
    return e;
}

ExprPtr Expr::make_add(ExprPtr a, ExprPtr b) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::add;
    e->lhs = std::move(a);
    e->rhs = std::move(b);
    return e;
}

ExprPtr Expr::make_mul(ExprPtr a, ExprPtr b) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::mul;
    e->lhs = std::move(a);
    e->rhs = std::move(b);
    return e;
}

std::string to_string(const Expr& expr) {
    switch (expr.kind) {
        case Expr::Kind::ref: return expr.name;
        case Expr::Kind::add: return to_string(*expr.lhs) + "+" + to_string(*expr.rhs);
        case Expr::Kind::mul: return to_string(*expr.lhs) + "*" + to_string(*expr.rhs);
    }
    return {};
}

bool structurally_equal(const Expr& a, const Expr& b) {
    if (a.kind != b.kind) return false;
    if (a.kind == Expr::Kind::ref) return a.name == b.name;
    return structurally_equal(*a.lhs, *b.lhs) && structurally_equal(*a.rhs, *b.rhs);
}

bool structurally_equal(const ModelAst& a, const ModelAst& b) {
    if (a.statements.size() != b.statements.size()) return false;
    for (std::size_t i = 0; i < a.statements.size(); ++i) {
        const auto& x = a.statements[i];
        const auto& y = b.statements[i];
        if (x.kind != y.kind || x.lhs != y.lhs) return false;
        if (x.kind == StatementKind::defined) {
            if (!x.expr || !y.expr || !structurally_equal(*x.expr, *y.expr)) return false;
            continue;
        }
        if (x.terms.size() != y.terms.size()) return false;
        for (std::size_t t = 0; t < x.terms.size(); ++t) {
            if (x.terms[t].variable != y.terms[t].variable) return false;
            if (x.terms[t].fixed != y.terms[t].fixed) return false;
            if (x.terms[t].label != y.terms[t].label) return false;
        }
    }
    return true;
}

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t");
    if (a == std::string::npos) return {};
    std::size_t b = s.find_last_not_of(" \t");
    return s.substr(a, b - a + 1);
}

bool is_identifier(const std::string& s) {
    if (s.empty()) return false;
    if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_') return false;
    return std::all_of(s.begin(), s.end(), [](unsigned char c) {
        return std::isalnum(c) || c == '_' || c == '.';
    });
}

std::optional<double> parse_number(const std::string& s) {
    if (s.empty()) return std::nullopt;
    const char* begin = s.data();
    const char* end = s.data() + s.size();
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc() || ptr != end) return std::nullopt;
    return v;
}

[[noreturn]] void parse_fail(int line, std::size_t column, const std::string& message) {
    std::ostringstream msg;
    msg << "model parse error at line " << line << ", column " << column + 1 << ": " << message;
    throw ParseError(msg.str());
}

std::vector<std::string> split_top_level(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    parts.push_back(cur);
    return parts;
}

Term parse_term(const std::string& raw, int line) {
    std::string text = trim(raw);
    if (text.empty()) parse_fail(line, 0, "empty term");
    Term term;
    std::size_t star = text.find('*');
    if (star == std::string::npos) {
        term.variable = text;
    } else {
        std::string modifier = trim(text.substr(0, star));
        term.variable = trim(text.substr(star + 1));
        if (term.variable.find('*') != std::string::npos)
            parse_fail(line, star, "a term carries at most one modifier");
        if (auto value = parse_number(modifier)) {
            term.fixed = *value;
        } else if (is_identifier(modifier)) {
            term.label = modifier;
        } else {
            parse_fail(line, 0, "modifier '" + modifier + "' is neither a number nor a label");
        }
    }
    if (!is_identifier(term.variable))
        parse_fail(line, 0, "invalid variable name '" + term.variable + "'");
    return term;
}

// Recursive-descent parser for `:=` right-hand sides: sums of products of
// identifiers.
struct ExprParser {
    const std::string& text;
    std::size_t pos = 0;
    int line;

    void skip_ws() {
        while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
    }

    ExprPtr parse_sum() {
        ExprPtr left = parse_product();
        skip_ws();
        while (pos < text.size() && text[pos] == '+') {
            ++pos;
            left = Expr::make_add(std::move(left), parse_product());
            skip_ws();
        }
        return left;
    }

    ExprPtr parse_product() {
        ExprPtr left = parse_atom();
        skip_ws();
        while (pos < text.size() && text[pos] == '*') {
            ++pos;
            left = Expr::make_mul(std::move(left), parse_atom());
            skip_ws();
        }
        return left;
    }

    ExprPtr parse_atom() {
        skip_ws();
        std::size_t start = pos;
        while (pos < text.size() &&
               (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_' ||
                text[pos] == '.'))
            ++pos;
        std::string name = text.substr(start, pos - start);
        if (!is_identifier(name))
            parse_fail(line, start, "expected a label in defined-parameter expression");
        return Expr::make_ref(std::move(name));
    }
};

ExprPtr parse_defined_expr(const std::string& text, int line) {
    ExprParser parser{text, 0, line};
    ExprPtr expr = parser.parse_sum();
    parser.skip_ws();
    if (parser.pos != text.size())
        parse_fail(line, parser.pos, "unexpected character '" + std::string(1, text[parser.pos]) +
                                         "' in defined-parameter expression");
    return expr;
}

Statement parse_statement(const std::string& text, int line) {
    Statement st;
    st.line = line;
    // First operator wins; `~~` and `=~` are matched before bare `~`.
    std::size_t op_pos = std::string::npos;
    std::string op;
    for (std::size_t i = 0; i + 1 <= text.size(); ++i) {
        if (i + 1 < text.size() && text[i] == ':' && text[i + 1] == '=') { op_pos = i; op = ":="; break; }
        if (i + 1 < text.size() && text[i] == '=' && text[i + 1] == '~') { op_pos = i; op = "=~"; break; }
        if (text[i] == '~') {
            if (i + 1 < text.size() && text[i + 1] == '~') { op_pos = i; op = "~~"; }
            else { op_pos = i; op = "~"; }
            break;
        }
    }
    if (op_pos == std::string::npos)
        parse_fail(line, 0, "no operator (~, ~~, =~, :=) in statement '" + trim(text) + "'");

    st.lhs = trim(text.substr(0, op_pos));
    std::string rhs = trim(text.substr(op_pos + op.size()));
    if (st.lhs.find('*') != std::string::npos)
        parse_fail(line, 0, "modifier not allowed on the left-hand side");
    if (!is_identifier(st.lhs))
        parse_fail(line, 0, "invalid left-hand side '" + st.lhs + "'");
    if (rhs.empty()) parse_fail(line, op_pos, "empty right-hand side");

    if (op == ":=") {
        st.kind = StatementKind::defined;
        st.expr = parse_defined_expr(rhs, line);
        return st;
    }
    st.kind = op == "~" ? StatementKind::regression
              : op == "~~" ? StatementKind::symmetric
                           : StatementKind::loading;
    for (const auto& part : split_top_level(rhs, '+')) st.terms.push_back(parse_term(part, line));
    return st;
}

}  // namespace

ModelAst parse_model(const std::string& text) {
    // Normalize the `≈` glyph (U+2248) to `=~` before line handling.
    std::string normalized;
    normalized.reserve(text.size());
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (i + 2 < text.size() && static_cast<unsigned char>(text[i]) == 0xE2 &&
            static_cast<unsigned char>(text[i + 1]) == 0x89 &&
            static_cast<unsigned char>(text[i + 2]) == 0x88) {
            normalized += "=~";
            i += 2;
        } else {
            normalized.push_back(text[i]);
        }
    }

    ModelAst ast;
    std::istringstream in(normalized);
    std::string line;
    std::string pending;
    int lineno = 0;
    int pending_line = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::string content = trim(line);
        if (content.empty()) continue;
        if (pending.empty()) pending_line = lineno;
        pending += content;
        if (pending.back() == '+') continue;  // statement wraps
        ast.statements.push_back(parse_statement(pending, pending_line));
        pending.clear();
    }
    if (!pending.empty())
        parse_fail(pending_line, pending.size(), "statement ends with dangling '+' at end of input");
    return ast;
}

namespace {

std::string format_number(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    return std::string(buf, ptr);
}

std::string term_text(const Term& t) {
    if (t.fixed) return format_number(*t.fixed) + "*" + t.variable;
    if (t.label) return *t.label + "*" + t.variable;
    return t.variable;
}

}  // namespace

std::string print_model(const ModelAst& ast) {
    std::ostringstream out;
    for (const auto& st : ast.statements) {
        if (st.kind == StatementKind::defined) {
            out << st.lhs << " := " << to_string(*st.expr) << "\n";
            continue;
        }
        const char* op = st.kind == StatementKind::regression ? "~"
                         : st.kind == StatementKind::symmetric ? "~~"
                                                               : "=~";
        out << st.lhs << " " << op << " ";
        for (std::size_t i = 0; i < st.terms.size(); ++i) {
            if (i) out << "+";
            out << term_text(st.terms[i]);
        }
        out << "\n";
    }
    return out.str();
}

std::size_t ParameterTable::free_count() const {
    std::set<std::string> labels;
    std::size_t unlabeled = 0;
    for (const auto& row : rows) {
        if (row.op == ":=" || !row.free) continue;
        if (row.label) labels.insert(*row.label);
        else ++unlabeled;
    }
    return unlabeled + labels.size();
}

namespace {

std::string lowercased(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

void collect_refs(const Expr& e, std::vector<std::string>& out) {
    if (e.kind == Expr::Kind::ref) {
        out.push_back(e.name);
        return;
    }
    collect_refs(*e.lhs, out);
    collect_refs(*e.rhs, out);
}

}  // namespace

ParameterTable lower(const ModelAst& ast, LoweringMode mode,
                     const std::vector<std::string>& observed_variables,
                     bool case_insensitive_vars) {
    ParameterTable table;

    std::map<std::string, std::string> canon;  // match key -> data name
    for (const auto& name : observed_variables)
        canon[case_insensitive_vars ? lowercased(name) : name] = name;

    // Latents, in order of first appearance on the left of a loading.
    std::vector<std::string> latents;
    for (const auto& st : ast.statements)
        if (st.kind == StatementKind::loading &&
            std::find(latents.begin(), latents.end(), st.lhs) == latents.end())
            latents.push_back(st.lhs);

    auto resolve = [&](const std::string& name) -> std::string {
        auto it = canon.find(case_insensitive_vars ? lowercased(name) : name);
        if (it != canon.end()) return it->second;
        if (std::find(latents.begin(), latents.end(), name) != latents.end()) return name;
        throw ParseError("variable '" + name +
                         "' is neither an observed data column nor a declared latent"
                         " (use --case-insensitive if the model and data differ only in case)");
    };

    std::set<std::string> used_observed_set;
    std::vector<std::string> used_observed;  // model order
    auto note_observed = [&](const std::string& name) {
        if (std::find(latents.begin(), latents.end(), name) != latents.end()) return;
        if (used_observed_set.insert(name).second) used_observed.push_back(name);
    };

    std::set<std::string> declared_labels;
    std::set<std::string> defined_names;
    std::set<std::pair<std::string, std::string>> symmetric_cells;
    auto sym_key = [](std::string a, std::string b) {
        return a <= b ? std::make_pair(a, b) : std::make_pair(b, a);
    };

    for (const auto& st : ast.statements) {
        if (st.kind == StatementKind::defined) {
            std::vector<std::string> refs;
            collect_refs(*st.expr, refs);
            for (const auto& ref : refs)
                if (!declared_labels.count(ref) && !defined_names.count(ref))
                    throw ParseError("defined parameter '" + st.lhs +
                                     "' references unknown label '" + ref + "'");
            ParameterRow row;
            row.lhs = st.lhs;
            row.op = ":=";
            row.rhs = to_string(*st.expr);
            row.free = false;
            row.expr = st.expr;
            row.source_line = st.line;
            table.rows.push_back(std::move(row));
            defined_names.insert(st.lhs);
            continue;
        }
        std::string lhs = resolve(st.lhs);
        note_observed(lhs);
        for (const auto& term : st.terms) {
            std::string rhs = resolve(term.variable);
            note_observed(rhs);
            ParameterRow row;
            row.op = st.kind == StatementKind::regression ? "~"
                     : st.kind == StatementKind::symmetric ? "~~"
                                                           : "=~";
            row.lhs = lhs;
            row.rhs = rhs;
            row.source_line = st.line;
            if (term.fixed) {
                row.free = false;
                row.fixed_value = *term.fixed;
            } else if (term.label) {
                row.label = *term.label;
                declared_labels.insert(*term.label);
            }
            if (row.op == "=~" && row.free) row.start = 1.0;
            if (row.op == "~~") symmetric_cells.insert(sym_key(row.lhs, row.rhs));
            table.rows.push_back(std::move(row));
        }
    }

    if (mode == LoweringMode::auto_complete) {
        // Marker identification: fix the first loading of a latent to 1
        // unless some loading of that latent is already fixed.
        for (const auto& latent : latents) {
            bool has_fixed = false;
            ParameterRow* first = nullptr;
            for (auto& row : table.rows) {
                if (row.op != "=~" || row.lhs != latent) continue;
                if (!row.free) has_fixed = true;
                if (!first) first = &row;
            }
            if (!has_fixed && first) {
                first->free = false;
                first->fixed_value = 1.0;
                first->label.reset();
                first->start = 0.0;
            }
        }

        std::set<std::string> endogenous;  // lhs of any regression
        for (const auto& row : table.rows)
            if (row.op == "~") endogenous.insert(row.lhs);

        auto add_variance = [&](const std::string& v) {
            if (symmetric_cells.count(sym_key(v, v))) return;
            symmetric_cells.insert(sym_key(v, v));
            ParameterRow row;
            row.lhs = row.rhs = v;
            row.op = "~~";
            table.rows.push_back(std::move(row));
        };

        for (const auto& v : used_observed) add_variance(v);
        for (const auto& l : latents)
            if (endogenous.count(l)) add_variance(l);

        std::vector<std::string> exo_latents;
        for (const auto& l : latents)
            if (!endogenous.count(l)) exo_latents.push_back(l);
        for (const auto& l : exo_latents) add_variance(l);
        for (std::size_t i = 0; i < exo_latents.size(); ++i)
            for (std::size_t j = i + 1; j < exo_latents.size(); ++j) {
                auto key = sym_key(exo_latents[i], exo_latents[j]);
                if (symmetric_cells.insert(key).second) {
                    ParameterRow row;
                    row.lhs = exo_latents[i];
                    row.rhs = exo_latents[j];
                    row.op = "~~";
                    table.rows.push_back(std::move(row));
                }
            }
    }

    table.observed = used_observed;
    table.latents = latents;
    return table;
}

}  // namespace revsem
