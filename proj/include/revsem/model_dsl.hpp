#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace revsem {

/// Expression over parameter labels (and previously defined names) built
/// from `+` and `*`, as used on the right of `:=`.
struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;
struct Expr {
    enum class Kind { ref, add, mul };
    Kind kind = Kind::ref;
    std::string name;  // for ref
    ExprPtr lhs, rhs;  // for add / mul

    static ExprPtr make_ref(std::string n);
    static ExprPtr make_add(ExprPtr a, ExprPtr b);
    static ExprPtr make_mul(ExprPtr a, ExprPtr b);
};

std::string to_string(const Expr& expr);
bool structurally_equal(const Expr& a, const Expr& b);

/// One right-hand-side term: an optional fixed value or label modifier
/// applied to a variable ("1*reviewerScore", "a*reviewerscore", "x").
struct Term {
    std::optional<double> fixed;
    std::optional<std::string> label;
    std::string variable;
};

enum class StatementKind {
    regression,  // lhs ~ terms
    symmetric,   // lhs ~~ terms (variance when lhs == rhs)
    loading,     // lhs =~ terms (lhs is latent)
    defined,     // name := expr
};

struct Statement {
    StatementKind kind = StatementKind::regression;
    std::string lhs;
    std::vector<Term> terms;  // regression / symmetric / loading
    ExprPtr expr;             // defined
    int line = 0;
};

struct ModelAst {
    std::vector<Statement> statements;
};

bool structurally_equal(const ModelAst& a, const ModelAst& b);

/// `#` comments, newline-separated statements, trailing `+` continues a
/// statement on the next line. `≈` is accepted as a synonym for `=~`.
ModelAst parse_model(const std::string& text);

/// Canonical text form; parse_model(print_model(ast)) == ast structurally.
std::string print_model(const ModelAst& ast);

enum class LoweringMode { explicit_only, auto_complete };

struct ParameterRow {
    std::string lhs;
    std::string op;  // "~", "~~", "=~", ":="
    std::string rhs;
    bool free = true;
    std::optional<double> fixed_value;
    std::optional<std::string> label;
    double start = 0.0;
    ExprPtr expr;  // := rows only
    int source_line = 0;
};

struct ParameterTable {
    std::vector<ParameterRow> rows;
    std::vector<std::string> observed;  // model order, canonical data names
    std::vector<std::string> latents;

    /// Distinct free parameters (rows sharing a label count once).
    std::size_t free_count() const;
};

/// explicit_only keeps exactly the stated statements as parameters.
/// auto_complete additionally fixes the first loading of each latent to 1
/// (when none is fixed), adds residual variances for every observed
/// variable and endogenous latent, and adds variances plus pairwise
/// covariances for exogenous latents.
ParameterTable lower(const ModelAst& ast, LoweringMode mode,
                     const std::vector<std::string>& observed_variables,
                     bool case_insensitive_vars = false);

}  // namespace revsem
