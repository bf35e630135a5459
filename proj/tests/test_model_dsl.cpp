#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <string>
#include <vector>

#include "revsem/errors.hpp"
#include "revsem/model_dsl.hpp"

using namespace revsem;

namespace {

const std::vector<std::string> kSixVariables = {
    "reviewerScore",    "thumbsUpCount",   "serviceCluster",
    "commentSentiment", "commentToxicity", "serviceRelativeRating"};

// Path model: all variances/covariances written out, fit in explicit mode.
const char* kPathModel = R"(
commentSentiment ~ reviewerScore + thumbsUpCount + serviceCluster
serviceRelativeRating ~ commentToxicity + commentSentiment + reviewerScore
commentToxicity ~ thumbsUpCount + reviewerScore
reviewerScore ~~ reviewerScore
thumbsUpCount ~~ thumbsUpCount
serviceCluster ~~ serviceCluster
reviewerScore ~~ thumbsUpCount + serviceCluster
thumbsUpCount ~~ serviceCluster
commentSentiment ~~ commentSentiment
commentToxicity ~~ commentToxicity
serviceRelativeRating ~~ serviceRelativeRating
commentSentiment ~~ commentToxicity
)";

// Same structure with labels and defined mediation parameters.
const char* kTotalEffectModel = R"(
commentSentiment ~ a*reviewerScore + thumbsUpCount + serviceCluster
serviceRelativeRating ~ e*commentToxicity + b*commentSentiment + c*reviewerScore
commentToxicity ~ thumbsUpCount + d*reviewerScore
reviewerScore ~~ reviewerScore
thumbsUpCount ~~ thumbsUpCount
serviceCluster ~~ serviceCluster
reviewerScore ~~ thumbsUpCount + serviceCluster
thumbsUpCount ~~ serviceCluster
commentSentiment ~~ commentSentiment
commentToxicity ~~ commentToxicity
serviceRelativeRating ~~ serviceRelativeRating
commentSentiment ~~ commentToxicity
SIE1 := a*b
SIE2 := d*e
TIE := SIE1+SIE2
TE := TIE+c
)";

// Two-factor measurement model, auto mode.
const char* kMeasurementModel =
    "sectorEffect \xE2\x89\x88 reviewerScore + thumbsUpCount + serviceCluster\n"
    "productSentiment \xE2\x89\x88 commentSentiment + commentToxicity + serviceRelativeRating\n";

// Full structural model with marker-variable identification, auto mode.
const char* kFullModel = R"(
sectorEffect =~ 1*reviewerScore + thumbsUpCount + serviceCluster
productSentiment =~ 1*commentSentiment + commentToxicity + serviceRelativeRating
productSentiment ~ sectorEffect
)";

}  // namespace

TEST_CASE("regression statement with three unmodified terms") {
    ModelAst ast = parse_model("commentSentiment~reviewerScore+thumbsUpCount+serviceCluster");
    REQUIRE(ast.statements.size() == 1);
    const Statement& st = ast.statements[0];
    CHECK(st.kind == StatementKind::regression);
    CHECK(st.lhs == "commentSentiment");
    REQUIRE(st.terms.size() == 3);
    for (const auto& term : st.terms) {
        CHECK(!term.fixed);
        CHECK(!term.label);
    }
    CHECK(st.terms[1].variable == "thumbsUpCount");
}

TEST_CASE("defined statement parses to a product expression") {
    ModelAst ast = parse_model("SIE1:=a*b");
    REQUIRE(ast.statements.size() == 1);
    const Statement& st = ast.statements[0];
    CHECK(st.kind == StatementKind::defined);
    CHECK(st.lhs == "SIE1");
    REQUIRE(st.expr);
    CHECK(structurally_equal(*st.expr,
                             *Expr::make_mul(Expr::make_ref("a"), Expr::make_ref("b"))));
}

TEST_CASE("defined expressions honor * over + precedence") {
    ModelAst ast = parse_model("T := a*b+c*d");
    ExprPtr expected = Expr::make_add(Expr::make_mul(Expr::make_ref("a"), Expr::make_ref("b")),
                                      Expr::make_mul(Expr::make_ref("c"), Expr::make_ref("d")));
    CHECK(structurally_equal(*ast.statements[0].expr, *expected));
}

TEST_CASE("loading with a fixed first term") {
    ModelAst ast = parse_model("sectorEffect =~ 1*reviewerScore+thumbsUpCount+serviceCluster");
    const Statement& st = ast.statements[0];
    CHECK(st.kind == StatementKind::loading);
    REQUIRE(st.terms.size() == 3);
    CHECK(st.terms[0].fixed == 1.0);
    CHECK(st.terms[0].variable == "reviewerScore");
    CHECK(!st.terms[1].fixed);
}

TEST_CASE("the approx glyph is a loading-operator synonym") {
    ModelAst a = parse_model("f \xE2\x89\x88 x + y");
    ModelAst b = parse_model("f =~ x + y");
    CHECK(structurally_equal(a, b));
}

TEST_CASE("comments and continuation lines") {
    ModelAst ast = parse_model(
        "# leading comment\n"
        "y ~ x1 + # trailing comment\n"
        "    x2\n");
    REQUIRE(ast.statements.size() == 1);
    CHECK(ast.statements[0].terms.size() == 2);
    CHECK(ast.statements[0].terms[1].variable == "x2");
}

TEST_CASE("parse errors carry position information") {
    CHECK_THROWS_WITH_AS(parse_model("y ~> x"), doctest::Contains("line 1"), ParseError);
    CHECK_THROWS_AS(parse_model("2*y ~ x"), ParseError);      // modifier on the lhs
    CHECK_THROWS_AS(parse_model("y ~ x +"), ParseError);      // dangling + at EOF
    CHECK_THROWS_AS(parse_model("y ~ 1*2*x"), ParseError);    // double modifier
    CHECK_THROWS_AS(parse_model("T := a ** b"), ParseError);
}

TEST_CASE("print is parseable and canonical") {
    ModelAst ast = parse_model(kPathModel);
    CHECK(structurally_equal(parse_model(print_model(ast)), ast));

    ModelAst te = parse_model("TE := TIE+c");
    CHECK(print_model(te).find("TE := TIE+c") != std::string::npos);

    CHECK(print_model(ModelAst{}).empty());
}

TEST_CASE("all four bundled model shapes parse and lower") {
    CHECK(lower(parse_model(kPathModel), LoweringMode::explicit_only, kSixVariables)
              .free_count() == 18);
    CHECK(lower(parse_model(kMeasurementModel), LoweringMode::auto_complete, kSixVariables)
              .free_count() == 13);
    CHECK(lower(parse_model(kFullModel), LoweringMode::auto_complete, kSixVariables)
              .free_count() == 13);

    ParameterTable te =
        lower(parse_model(kTotalEffectModel), LoweringMode::explicit_only, kSixVariables);
    CHECK(te.free_count() == 18);
    std::size_t defined = 0;
    for (const auto& row : te.rows)
        if (row.op == ":=") ++defined;
    CHECK(defined == 4);
}

TEST_CASE("labels and defined statements never change the free count") {
    ParameterTable plain =
        lower(parse_model(kPathModel), LoweringMode::explicit_only, kSixVariables);
    ParameterTable labeled =
        lower(parse_model(kTotalEffectModel), LoweringMode::explicit_only, kSixVariables);
    CHECK(plain.free_count() == labeled.free_count());
}

TEST_CASE("auto mode fixes the first loading only when none is fixed") {
    ParameterTable no_marker = lower(parse_model("f =~ x + y + z\n"),
                                     LoweringMode::auto_complete, {"x", "y", "z"});
    int fixed_loadings = 0;
    for (const auto& row : no_marker.rows)
        if (row.op == "=~" && !row.free) ++fixed_loadings;
    CHECK(fixed_loadings == 1);

    ParameterTable marker = lower(parse_model("f =~ x + 1*y + z\n"),
                                  LoweringMode::auto_complete, {"x", "y", "z"});
    for (const auto& row : marker.rows)
        if (row.op == "=~" && !row.free) CHECK(row.rhs == "y");
    // free loadings: x and z; variances: 3 residuals + factor -> 6 free total
    CHECK(marker.free_count() == 6);
}

TEST_CASE("lowering errors") {
    CHECK_THROWS_WITH_AS(
        lower(parse_model("y ~ nowhere"), LoweringMode::explicit_only, {"y", "x"}),
        doctest::Contains("nowhere"), ParseError);
    CHECK_THROWS_WITH_AS(
        lower(parse_model("y ~ b*x\nP := b*q"), LoweringMode::explicit_only, {"y", "x"}),
        doctest::Contains("q"), ParseError);
}

TEST_CASE("case-insensitive variable matching is opt-in") {
    CHECK_THROWS_AS(lower(parse_model("y ~ X"), LoweringMode::explicit_only, {"y", "x"}),
                    ParseError);
    ParameterTable table =
        lower(parse_model("Y ~ X"), LoweringMode::explicit_only, {"y", "x"}, true);
    // canonical data names are used in the table
    CHECK(table.rows[0].lhs == "y");
    CHECK(table.rows[0].rhs == "x");
}

// --- parse/print round-trip over generated ASTs ---

namespace {

struct AstGen {
    std::mt19937 rng{424242};

    std::string name(const char* prefix, int max) {
        std::uniform_int_distribution<int> pick(0, max - 1);
        return prefix + std::to_string(pick(rng));
    }

    // The grammar has no parentheses, so only left-associated sums of
    // left-associated products are expressible.
    ExprPtr product() {
        std::uniform_int_distribution<int> nfactors(1, 3);
        ExprPtr out = Expr::make_ref(name("l", 6));
        for (int i = nfactors(rng); i > 1; --i)
            out = Expr::make_mul(out, Expr::make_ref(name("l", 6)));
        return out;
    }

    ExprPtr expr(int) {
        std::uniform_int_distribution<int> nterms(1, 3);
        ExprPtr out = product();
        for (int i = nterms(rng); i > 1; --i) out = Expr::make_add(out, product());
        return out;
    }

    Term term() {
        std::uniform_int_distribution<int> kind(0, 3);
        Term t;
        t.variable = name("v", 8);
        switch (kind(rng)) {
            case 0: t.fixed = std::uniform_int_distribution<int>(-3, 3)(rng) * 0.5; break;
            case 1: t.label = name("l", 6); break;
            default: break;
        }
        return t;
    }

    Statement statement() {
        std::uniform_int_distribution<int> kind(0, 3);
        std::uniform_int_distribution<int> nterms(1, 4);
        Statement st;
        switch (kind(rng)) {
            case 0: st.kind = StatementKind::regression; break;
            case 1: st.kind = StatementKind::symmetric; break;
            case 2: st.kind = StatementKind::loading; break;
            default: st.kind = StatementKind::defined; break;
        }
        if (st.kind == StatementKind::defined) {
            st.lhs = name("D", 5);
            st.expr = expr(3);
        } else {
            st.lhs = name(st.kind == StatementKind::loading ? "f" : "v", 8);
            int n = nterms(rng);
            for (int i = 0; i < n; ++i) st.terms.push_back(term());
        }
        return st;
    }

    ModelAst model() {
        std::uniform_int_distribution<int> nstmt(0, 8);
        ModelAst ast;
        int n = nstmt(rng);
        for (int i = 0; i < n; ++i) ast.statements.push_back(statement());
        return ast;
    }
};

}  // namespace

TEST_CASE("parse after print is the identity on 1000 generated models") {
    AstGen gen;
    for (int i = 0; i < 1000; ++i) {
        ModelAst ast = gen.model();
        std::string text = print_model(ast);
        ModelAst back = parse_model(text);
        CHECK(structurally_equal(back, ast));
    }
}
