#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rtgmap/edit_op.hpp"
#include "rtgmap/errors.hpp"
#include "rtgmap/grammar_text.hpp"
#include "rtgmap/mapping.hpp"
#include "support/fixtures.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace rtgmap;
using rtgmap::testsupport::load_grammar;

TEST_CASE("op syntax round-trips") {
    const char* lines[] = {
        "set_startelm(H1)",
        "unset_startelm(H2)",
        "ins_elm(X,A,0.1)",
        "del_elm(X,epsilon,0.2)",
        "rel_root(X,a,b)",
        "rel_elm(H1,I2,I1,0.1.0)",
        "ins_opr(I1,|,0,1)",
        "del_opr(H1,|,0,1)",
        "rel_opr(X,.,*,0)",
        "ins_rule(A,a)",
        "del_rule(A,a)",
        "ins_tree(I1,(C|Pol),0.1)",
        "del_tree(I1,B,0.2)",
        "ins_treerule(I3,info,B)",
        "del_treerule(I2,info,(S.PN))",
        "ins_tree(H1,I2*,0.1)",
    };
    for (const char* line : lines) {
        EditOp op = parse_edit_op(line);
        CHECK(to_string(op) == line);
        CHECK(parse_edit_op(to_string(op)) == op);
    }
    CHECK_THROWS_AS(parse_edit_op("frobnicate(X)"), SyntaxError);
    CHECK_THROWS_AS(parse_edit_op("ins_elm(X,A)"), SyntaxError);
}

TEST_CASE("ins_opr wraps children under a new operator") {
    Grammar fig4 = load_grammar("fig4.rtg");
    Grammar g = apply_edit(fig4, parse_edit_op("ins_opr(I1,|,0,1)"));
    CHECK(tree_to_regex(g.reg("I1")) == "(P|T)");
    CHECK(g.reg("I1") == RegexTree::choice({regex_to_tree("P|T")}));

    // wrapping part of a concat
    Grammar abc = parse_grammar("start: X\nX -> x [A.B.C]\nA -> a [epsilon]\nB -> b [epsilon]\nC -> c [epsilon]\n");
    Grammar wrapped = apply_edit(abc, parse_edit_op("ins_opr(X,|,0.0,2)"));
    CHECK(tree_to_regex(wrapped.reg("X")) == "(A|B).C");

    CHECK_THROWS_AS(apply_edit(abc, parse_edit_op("ins_opr(X,*,0.0,2)")), NotDefined);
    CHECK_THROWS_AS(apply_edit(abc, parse_edit_op("ins_opr(X,|,0.3,2)")), NotDefined);
}

TEST_CASE("rel_elm renames one occurrence") {
    Grammar fig4 = load_grammar("fig4.rtg");
    Grammar staged = apply_script_lenient(fig4, {parse_edit_op("ins_opr(H1,|,0,1)"),
                                                 parse_edit_op("ins_tree(H1,I2*,0.1)")});
    Grammar g = apply_edit(staged, parse_edit_op("rel_elm(H1,I2,I1,0.1.0)"));
    CHECK(tree_to_regex(g.reg("H1")) == "I1*|I1*");
    // the original rule of I2 is untouched
    CHECK(g.reg("I2") == fig4.reg("I2"));

    CHECK_THROWS_AS(apply_edit(staged, parse_edit_op("rel_elm(H1,I3,I1,0.1.0)")), NotDefined);
}

TEST_CASE("deletion guards hold") {
    Grammar g = parse_grammar("start: X\nX -> x [A|B]\nA -> a [epsilon]\nB -> b [epsilon]\n");
    // cannot delete the last child of an operator node
    Grammar one = apply_edit(g, parse_edit_op("del_elm(X,B,0.1)"));
    CHECK(tree_to_regex(one.reg("X")) == "(A)");
    CHECK_THROWS_AS(apply_edit(one, parse_edit_op("del_elm(X,A,0.0)")), NotDefined);

    // del_rule requires an epsilon body and no remaining occurrences
    CHECK_THROWS_AS(apply_edit(g, parse_edit_op("del_rule(A,a)")), DanglingReference);
    Grammar dropped = apply_edit(one, parse_edit_op("del_rule(B,b)"));
    CHECK(!dropped.has_rule("B"));

    // del_treerule matches the current body
    CHECK_THROWS_AS(apply_edit(g, parse_edit_op("del_treerule(X,x,(A|C))")), NotDefined);
}

TEST_CASE("start-set edits require a real change") {
    Grammar g = parse_grammar("start: A\nA -> a [B*]\nB -> b [epsilon]\n");
    Grammar g2 = apply_edit(g, parse_edit_op("set_startelm(B)"));
    CHECK(g2.starts() == std::set<std::string>{"A", "B"});
    CHECK_THROWS_AS(apply_edit(g, parse_edit_op("set_startelm(A)")), NotDefined);
    CHECK_THROWS_AS(apply_edit(g, parse_edit_op("unset_startelm(B)")), NotDefined);
    CHECK(apply_edit(g2, parse_edit_op("unset_startelm(B)")) == g);
}

TEST_CASE("ins_rule brings a fresh start symbol") {
    Grammar g = parse_grammar("start: A\nA -> a [epsilon]\n");
    Grammar g2 = apply_edit(g, parse_edit_op("ins_rule(B,b)"));
    CHECK(g2.reg("B") == RegexTree::epsilon());
    CHECK(g2.starts().count("B"));
    CHECK_THROWS_AS(apply_edit(g2, parse_edit_op("ins_rule(A,c)")), NotDefined);
}

TEST_CASE("costs: elementary 1, shortcut 5, registered simplifications 0") {
    Grammar fig4 = load_grammar("fig4.rtg");
    CHECK(cost(parse_edit_op("ins_tree(H1,I2*,0.1)"),
               apply_edit(fig4, parse_edit_op("ins_opr(H1,|,0,1)"))) == 5);
    CHECK(cost(parse_edit_op("ins_opr(I1,|,0,1)"), fig4) == 1);

    Grammar staged = apply_script_lenient(fig4, {parse_edit_op("ins_opr(H1,|,0,1)"),
                                                 parse_edit_op("ins_tree(H1,I2*,0.1)"),
                                                 parse_edit_op("rel_elm(H1,I2,I1,0.1.0)")});
    CHECK(cost(parse_edit_op("rel_elm(H1,I2,I1,0.1.0)"),
               apply_script_lenient(fig4, {parse_edit_op("ins_opr(H1,|,0,1)"),
                                           parse_edit_op("ins_tree(H1,I2*,0.1)")})) == 1);

    // (a) flattening a choice directly under a choice
    Grammar nested = parse_grammar("start: X\nX -> x [(A|B)|C]\nA -> a [epsilon]\nB -> b [epsilon]\nC -> c [epsilon]\n");
    CHECK(cost(parse_edit_op("del_opr(X,|,0.0,2)"), nested) == 0);

    // (b) collapsing a unary choice
    Grammar unary = apply_edit(parse_grammar("start: X\nX -> x [A]\nA -> a [epsilon]\n"),
                               parse_edit_op("ins_opr(X,|,0,1)"));
    CHECK(cost(parse_edit_op("del_opr(X,|,0,1)"), unary) == 0);

    // a star collapse changes the language and costs 1
    Grammar starred = parse_grammar("start: X\nX -> x [A*]\nA -> a [epsilon]\n");
    CHECK(cost(parse_edit_op("del_opr(X,*,0,1)"), starred) == 1);
}

TEST_CASE("registered zero-cost patterns preserve the bounded language") {
    struct Case {
        const char* grammar;
        const char* op;
    } cases[] = {
        {"start: X\nX -> x [(A|B)|C]\nA -> a [epsilon]\nB -> b [epsilon]\nC -> c [epsilon]\n",
         "del_opr(X,|,0.0,2)"},
        {"start: X\nX -> x [A.(B.C)]\nA -> a [epsilon]\nB -> b [epsilon]\nC -> c [epsilon]\n",
         "del_opr(X,.,0.1,2)"},
    };
    for (const auto& c : cases) {
        Grammar g = parse_grammar(c.grammar);
        EditOp op = parse_edit_op(c.op);
        REQUIRE(cost(op, g) == 0);
        Grammar g2 = apply_edit(g, op);
        for (const auto& s : g.starts()) {
            CHECK(oracle::language_trees(g, s, 6) == oracle::language_trees(g2, s, 6));
        }
    }
}

TEST_CASE("expansion equals the shortcut op") {
    // the documented example sequence
    Grammar g = parse_grammar("start: S\nS -> s [B.C]\nB -> b [epsilon]\nC -> c [epsilon]\n");
    EditOp op = parse_edit_op("ins_treerule(A,a,B.C)");
    std::vector<EditOp> seq = expand(op);
    REQUIRE(seq.size() == 5);
    CHECK(to_string(seq[0]) == "ins_rule(A,a)");
    CHECK(to_string(seq[1]) == "ins_opr(A,.,0,1)");
    CHECK(to_string(seq[2]) == "ins_elm(A,B,0.0)");
    CHECK(to_string(seq[3]) == "ins_elm(A,C,0.1)");
    CHECK(to_string(seq[4]) == "del_elm(A,epsilon,0.2)");
    CHECK(apply_edit(g, op) == apply_script_lenient(g, seq));

    CHECK(expand(parse_edit_op("ins_elm(X,A,0.1)")).size() == 1);
    CHECK(expand(parse_edit_op("del_tree(X,A,0.1)")) ==
          std::vector<EditOp>{parse_edit_op("del_elm(X,A,0.1)")});
}

TEST_CASE("expansion equivalence on random shortcut ops") {
    testgen::Rng rng(9001);
    int verified = 0;
    while (verified < 50) {
        Grammar g = testgen::random_reduced_grammar(rng);
        auto op = testgen::random_applicable_op(rng, g);
        if (!op || is_elementary(*op)) continue;
        CHECK(apply_edit(g, *op) == apply_script_lenient(g, expand(*op)));
        ++verified;
    }
}

TEST_CASE("inversion follows the pairing table and is an involution") {
    CHECK(to_string(invert_op(parse_edit_op("ins_tree(I1,B,0.2)"))) == "del_tree(I1,B,0.2)");
    CHECK(to_string(invert_op(parse_edit_op("rel_root(X,a,b)"))) == "rel_root(X,b,a)");
    CHECK(to_string(invert_op(parse_edit_op("rel_elm(H1,I2,I1,0.1.0)"))) ==
          "rel_elm(H1,I1,I2,0.1.0)");
    CHECK(to_string(invert_op(parse_edit_op("set_startelm(A)"))) == "unset_startelm(A)");
    CHECK(to_string(invert_op(parse_edit_op("ins_opr(H1,|,0,1)"))) == "del_opr(H1,|,0,1)");
    CHECK(to_string(invert_op(parse_edit_op("rel_opr(X,.,|,0)"))) == "rel_opr(X,|,.,0)");
    CHECK(to_string(invert_op(parse_edit_op("ins_rule(A,a)"))) == "del_rule(A,a)");
    CHECK(to_string(invert_op(parse_edit_op("ins_treerule(I3,info,B)"))) ==
          "del_treerule(I3,info,B)");

    testgen::Rng rng(9002);
    for (int i = 0; i < 100; ++i) {
        Grammar g = testgen::random_reduced_grammar(rng);
        auto op = testgen::random_applicable_op(rng, g);
        if (!op) continue;
        CHECK(invert_op(invert_op(*op)) == *op);
    }
}

TEST_CASE("apply then inverse restores the grammar for content-model ops") {
    testgen::Rng rng(9003);
    int checked = 0;
    while (checked < 120) {
        Grammar g = testgen::random_reduced_grammar(rng);
        auto op = testgen::random_applicable_op(rng, g);
        if (!op) continue;
        // Rule deletions of non-start symbols lose start-set information:
        // their inverses re-add the symbol as a start (see ins_rule). Those
        // are covered by the acceptance round-trip criterion instead.
        bool lossy = false;
        if (const auto* d = std::get_if<DelRule>(&*op)) lossy = !g.starts().count(d->nt);
        if (const auto* d = std::get_if<DelTreeRule>(&*op)) lossy = !g.starts().count(d->nt);
        if (lossy) continue;
        Grammar there = apply_edit(g, *op);
        Grammar back = apply_edit(there, invert_op(*op));
        CHECK(back == g);
        ++checked;
    }
}

TEST_CASE("normalize is the identity on every op result") {
    testgen::Rng rng(9004);
    for (int i = 0; i < 60; ++i) {
        Grammar g = testgen::random_reduced_grammar(rng);
        auto op = testgen::random_applicable_op(rng, g);
        if (!op) continue;
        Grammar out = apply_edit(g, *op);
        std::vector<RawRule> raw;
        for (const auto& [nt, rule] : out.rules())
            raw.push_back(RawRule{nt, rule.terminal, rule.body});
        CHECK(normalize(raw, out.starts()) == out);
        for (const auto& [nt, rule] : out.rules())
            CHECK(is_well_formed(RuleTree{rule.terminal, rule.body}).ok);
    }
}
