#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rtgmap/errors.hpp"
#include "rtgmap/grammar_text.hpp"
#include "rtgmap/translate.hpp"
#include "support/fixtures.hpp"

using namespace rtgmap;
using rtgmap::testsupport::load_grammar;
using rtgmap::testsupport::load_map;
using rtgmap::testsupport::load_xml;

namespace {

SchemaMapping hospital_inverse() {
    Grammar fig4 = load_grammar("fig4.rtg");
    return invert(mapping_gen(fig4));
}

} // namespace

TEST_CASE("annotation of the bill node follows the published coordinates") {
    Grammar fig5 = load_grammar("fig5.ltg");
    XmlTree fig3b = load_xml("fig3b.xml");
    auto all = annotate(fig3b, fig5, 0);
    REQUIRE(!all.empty());

    Position bill_pos = parse_position("1.0");
    for (const auto& a : all) {
        CHECK(a.at(bill_pos).nt == "B");
        CHECK(to_string(*a.at(bill_pos).occurrence) == "0.2");
    }
    // first witness routes the info nodes through the first alternative
    CHECK(all[0].at(parse_position("1")).nt == "I1");
    CHECK(to_string(*all[0].at(parse_position("1")).occurrence) == "0.0.0");
    CHECK(format_annotation(bill_pos, all[0].at(bill_pos)) == "(1.0, B^0.2)");
    CHECK(format_annotation(Position::root(), all[0].at(Position::root())) == "(e, H1)");

    // the root hedge is matched through a three-way ambiguous choice
    CHECK(all.size() == 3);
}

TEST_CASE("a childless root annotates through the empty star") {
    Grammar fig5 = load_grammar("fig5.ltg");
    auto all = annotate(XmlTree::leaf("hospital"), fig5, 0);
    REQUIRE(all.size() == 1);
    CHECK(all[0].at(Position::root()).nt == "H1");
}

TEST_CASE("translating Fig 3(b) backward rebuilds the patient subtree at cost 5") {
    SchemaMapping inv = hospital_inverse();
    XmlTree fig3b = load_xml("fig3b.xml");
    XmlTree fig3c = load_xml("fig3c.xml");

    auto results = translate(fig3b, inv, 5);
    REQUIRE(!results.empty());

    bool found = false;
    for (const auto& r : results) {
        CHECK(r.total_cost <= 5);
        if (r.result == fig3c) {
            found = true;
            CHECK(r.total_cost == 5);
            // the only op that touches the document is del_tree(I1,B,0.2)
            for (const auto& step : r.trace) {
                if (step.op_text == "del_tree(I1,B,0.2)") {
                    CHECK(!step.zero_change());
                } else {
                    CHECK_MESSAGE(step.zero_change(), step.op_text, " changed the document");
                }
            }
        }
    }
    CHECK(found);
}

TEST_CASE("identity mapping translates to the document itself") {
    Grammar fig5 = load_grammar("fig5.ltg");
    SchemaMapping identity{fig5, fig5, {}};
    XmlTree fig3b = load_xml("fig3b.xml");
    auto results = translate(fig3b, identity, 3);
    REQUIRE(results.size() == 1);
    CHECK(results[0].result == fig3b);
    CHECK(results[0].total_cost == 0);
    CHECK(results[0].trace.empty());
}

TEST_CASE("a patient-only document passes through the inverse mapping unchanged") {
    SchemaMapping inv = hospital_inverse();
    XmlTree doc = parse_term_string("hospital(info(patient(SSN,pname)))");
    auto results = translate(doc, inv, 5);
    REQUIRE(!results.empty());
    CHECK(results[0].result == doc);
    CHECK(results[0].total_cost == 0);
    CHECK(doc_distance(doc, results[0].result) == 0);
    CHECK(validate(results[0].result, inv.target).has_value());
}

TEST_CASE("the billing document is repaired toward the surviving branches") {
    SchemaMapping inv = hospital_inverse();
    XmlTree fig3a = load_xml("fig3a.xml");
    auto results = translate(fig3a, inv, 5);
    // the bill subtree cannot stay (its branch is deleted); every result is
    // valid against the final grammar and within budget
    Grammar final_grammar = apply_script_lenient(inv.source, inv.script);
    for (const auto& r : results) {
        CHECK(r.total_cost <= 5);
        CHECK(validate(r.result, final_grammar).has_value());
        CHECK(r.result != fig3a);
    }
    CHECK(!results.empty());
}

TEST_CASE("forward translation of a valid document costs nothing") {
    Grammar fig4 = load_grammar("fig4.rtg");
    SchemaMapping m = mapping_gen(fig4);
    XmlTree fig3a = load_xml("fig3a.xml");

    auto results = translate(fig3a, m, 2);
    REQUIRE(results.size() == 1);
    CHECK(results[0].result == fig3a);
    CHECK(results[0].total_cost == 0);
    for (const auto& step : results[0].trace) CHECK(step.zero_change());
}

TEST_CASE("translate_step handles the published zero-change cases") {
    Grammar fig5 = load_grammar("fig5.ltg");
    XmlTree fig3b = load_xml("fig3b.xml");
    auto ann = annotate(fig3b, fig5, 1);

    std::vector<TranslateBranch> branches{TranslateBranch{fig3b, ann[0], 0}};

    // ins_treerule(I3,info,B) extends the language: zero change
    EditOp op1 = parse_edit_op("ins_treerule(I3,info,B)");
    Grammar g1 = apply_edit(fig5, op1);
    auto s1 = translate_step(branches, op1, fig5, g1, 5);
    REQUIRE(s1.size() == 1);
    CHECK(s1[0].doc == fig3b);
    CHECK(s1[0].cost == 0);

    // rel_elm(H1,I1,I3,0.2.0) touches no annotation of this witness
    EditOp op2 = parse_edit_op("rel_elm(H1,I1,I3,0.2.0)");
    Grammar g2 = apply_edit(g1, op2);
    auto s2 = translate_step(s1, op2, g1, g2, 5);
    REQUIRE(s2.size() == 1);
    CHECK(s2[0].doc == fig3b);
    CHECK(s2[0].cost == 0);
}

TEST_CASE("translate_step relabels schema-forced root renames at zero cost") {
    Grammar g = parse_grammar("start: X\nX -> a [Y*]\nY -> y [epsilon]\n");
    EditOp op = parse_edit_op("rel_root(X,a,b)");
    Grammar g2 = apply_edit(g, op);

    XmlTree doc = parse_term_string("a(y,y,y)");
    auto ann = annotate(doc, g, 1);
    auto stepped = translate_step({TranslateBranch{doc, ann[0], 0}}, op, g, g2, 3);
    REQUIRE(stepped.size() == 1);
    CHECK(stepped[0].doc == parse_term_string("b(y,y,y)"));
    CHECK(stepped[0].cost == 0);
    CHECK(validate(stepped[0].doc, g2).has_value());
}

TEST_CASE("a mandatory insertion splices minimal material") {
    Grammar g = parse_grammar("start: X\nX -> x [A.C]\nA -> a [epsilon]\nC -> c [epsilon]\nB -> b [epsilon]\nS2 -> s2 [B]\n");
    // keep B reachable through a second start so the grammar stays reduced
    Grammar g0 = parse_grammar("start: X S2\nX -> x [A.C]\nA -> a [epsilon]\nC -> c [epsilon]\nB -> b [epsilon]\nS2 -> s2 [B]\n");
    EditOp op = parse_edit_op("ins_elm(X,B,0.1)");
    Grammar g1 = apply_edit(g0, op);

    XmlTree doc = parse_term_string("x(a,c)");
    auto ann = annotate(doc, g0, 1);
    auto stepped = translate_step({TranslateBranch{doc, ann[0], 0}}, op, g0, g1, 3);
    REQUIRE(stepped.size() == 1);
    CHECK(stepped[0].doc == parse_term_string("x(a,b,c)"));
    CHECK(stepped[0].cost == 1);
    CHECK(validate(stepped[0].doc, g1).has_value());
}

TEST_CASE("an optional insertion under a choice changes nothing") {
    Grammar g = parse_grammar("start: X S2\nX -> x [A|C]\nA -> a [epsilon]\nC -> c [epsilon]\nB -> b [epsilon]\nS2 -> s2 [B]\n");
    EditOp op = parse_edit_op("ins_elm(X,B,0.1)");
    Grammar g1 = apply_edit(g, op);
    XmlTree doc = parse_term_string("x(a)");
    auto ann = annotate(doc, g, 1);
    auto stepped = translate_step({TranslateBranch{doc, ann[0], 0}}, op, g, g1, 3);
    REQUIRE(stepped.size() == 1);
    CHECK(stepped[0].doc == doc);
    CHECK(stepped[0].cost == 0);
}

TEST_CASE("deleting a concat occurrence removes the matched children") {
    Grammar g = parse_grammar("start: X\nX -> x [A.B.C]\nA -> a [epsilon]\nB -> b [epsilon]\nC -> c [epsilon]\n");
    EditOp op = parse_edit_op("del_elm(X,B,0.1)");
    Grammar g1 = apply_edit(g, op);
    XmlTree doc = parse_term_string("x(a,b,c)");
    auto ann = annotate(doc, g, 1);
    auto stepped = translate_step({TranslateBranch{doc, ann[0], 0}}, op, g, g1, 3);
    REQUIRE(stepped.size() == 1);
    CHECK(stepped[0].doc == parse_term_string("x(a,c)"));
    CHECK(stepped[0].cost == 1);
    CHECK(validate(stepped[0].doc, g1).has_value());
}

TEST_CASE("every branch dying is reported as NoSolution") {
    SchemaMapping inv = hospital_inverse();
    XmlTree fig3b = load_xml("fig3b.xml");
    CHECK_THROWS_AS(translate(fig3b, inv, 4), NoSolution);  // the repair needs 5
}

TEST_CASE("translate confluences with plain correction for one-op scripts") {
    Grammar g0 = parse_grammar("start: X\nX -> x [(A|B)]\nA -> a [epsilon]\nB -> b [C]\nC -> c [epsilon]\n");
    EditOp op = parse_edit_op("del_elm(X,A,0.0)");
    Grammar g1 = apply_edit(g0, op);
    XmlTree doc = parse_term_string("x(a)");

    SchemaMapping m{g0, g1, {op}};
    auto results = translate(doc, m, 3);

    auto fixes = correct_hedge({XmlTree::leaf("a")}, g1.reg("X"), g1, 3, CorrectorOptions{0});
    REQUIRE(results.size() == fixes.items.size());
    for (const auto& fix : fixes.items) {
        XmlTree expected = doc;
        expected.children = fix.result;
        bool present = false;
        for (const auto& r : results)
            if (r.result == expected && r.total_cost == fix.cost) present = true;
        CHECK_MESSAGE(present, "missing confluent result at cost ", fix.cost);
    }
}

TEST_CASE("interactive chooser narrows to one branch") {
    Grammar g0 = parse_grammar("start: X\nX -> x [(A|B)]\nA -> a [epsilon]\nB -> b [C]\nC -> c [epsilon]\n");
    EditOp op = parse_edit_op("del_elm(X,A,0.0)");
    Grammar g1 = apply_edit(g0, op);
    SchemaMapping m{g0, g1, {op}};
    XmlTree doc = parse_term_string("x(a)");

    std::vector<CorrectionChoice> seen;
    TranslateOptions opts;
    opts.chooser = [&](const CorrectionChoice& c) {
        seen.push_back(c);
        return std::size_t{0};
    };
    auto results = translate(doc, m, 3, opts);
    REQUIRE(results.size() == 1);
    REQUIRE(seen.size() == 1);
    CHECK(seen[0].candidates.size() > 1);
}

TEST_CASE("invalid inputs are rejected up front") {
    Grammar fig5 = load_grammar("fig5.ltg");
    SchemaMapping identity{fig5, fig5, {}};
    CHECK_THROWS_AS(translate(XmlTree::leaf("nonsense"), identity, 2), InvalidDocument);
}
