#include <gtest/gtest.h>

#include "cqrelax/error.hpp"
#include "cqrelax/spj.hpp"
#include "fixtures.hpp"

namespace cqrelax {
namespace {

using testing::example_db;
using testing::sorted;
using testing::text_rows;
using testing::TextRows;

std::vector<std::string> aliases(const std::vector<OccAttr>& cls) {
  std::vector<std::string> out;
  for (const auto& a : cls) out.push_back(a.alias());
  return out;
}

class SpjTest : public ::testing::Test {
 protected:
  Database db = example_db();
  SPJQuery tr(const char* text) { return translate(parse_query(text), db); }
  AnswerTable run(const char* text) { return evaluate(tr(text), db); }
};

TEST_F(SpjTest, TranslateRunningExample) {
  auto s = tr("Ill(x, Flu) & Ill(x, Cough)");
  ASSERT_EQ(s.occurrences.size(), 2u);
  EXPECT_EQ(s.occurrences[1].attrs[1].alias(), "Disease#2");
  ASSERT_EQ(s.selections.size(), 2u);
  EXPECT_EQ(s.selections[0].attr.alias(), "Disease#1");
  EXPECT_EQ(s.selections[0].constant, Value("Flu"));
  EXPECT_EQ(s.selections[1].attr.alias(), "Disease#2");
  ASSERT_EQ(s.join_classes().size(), 1u);
  EXPECT_EQ(aliases(*s.join_classes()[0]), (std::vector<std::string>{"Name#1", "Name#2"}));
  ASSERT_EQ(s.projection.size(), 1u);
  EXPECT_EQ(s.projection[0].attr.alias(), "Name#1");
  EXPECT_EQ(s.projection[0].column, "x");
  EXPECT_NO_THROW(check_invariants(s));
}

TEST_F(SpjTest, TranslateCrossProduct) {
  auto s = tr("Ill(y, Flu) & Ill(x, Cough)");
  EXPECT_EQ(s.selections.size(), 2u);
  EXPECT_TRUE(s.join_classes().empty());
  EXPECT_EQ(s.classes.size(), 2u);
  ASSERT_EQ(s.projection.size(), 2u);
  EXPECT_EQ(s.projection[0].attr.alias(), "Name#1");
  EXPECT_EQ(s.projection[0].column, "y");
  EXPECT_EQ(s.projection[1].attr.alias(), "Name#2");
  EXPECT_EQ(s.projection[1].column, "x");
}

TEST_F(SpjTest, TranslateVariableDisease) {
  auto s = tr("Ill(x, y) & Ill(x, Cough)");
  ASSERT_EQ(s.selections.size(), 1u);
  EXPECT_EQ(s.selections[0].attr.alias(), "Disease#2");
  ASSERT_EQ(s.classes.size(), 2u);
  EXPECT_EQ(aliases(s.classes[0]), (std::vector<std::string>{"Name#1", "Name#2"}));
  EXPECT_EQ(aliases(s.classes[1]), (std::vector<std::string>{"Disease#1"}));
  ASSERT_EQ(s.projection.size(), 2u);
  EXPECT_EQ(s.projection[1].attr.alias(), "Disease#1");
}

TEST_F(SpjTest, TranslateErrors) {
  EXPECT_THROW(tr("Sick(x)"), QueryError);
  EXPECT_THROW(tr("Ill(x)"), QueryError);
  auto schemas = load_schema("relation P(Item: string, Price: numeric[0,10])");
  EXPECT_THROW(translate(parse_query("P(x, Cheap)"), schemas), QueryError);
  auto ok = translate(parse_query("P(7, y)"), schemas);
  EXPECT_EQ(ok.selections[0].constant, Value("7"));
}

TEST_F(SpjTest, RepeatedVariableInOneAtom) {
  auto schemas = load_schema("relation R(A: string, B: string)");
  Database d;
  d.add(load_relation_csv(schemas[0], "A,B\nx,x\nx,y\n"));
  auto s = translate(parse_query("R(a, a)"), d);
  EXPECT_EQ(s.join_classes().size(), 1u);
  EXPECT_EQ(text_rows(evaluate(s, d)), (TextRows{{"x"}}));
}

TEST_F(SpjTest, Render) {
  EXPECT_EQ(render(tr("Ill(x, Flu) & Ill(x, Cough)")),
            "PROJECT [x:=Name#1] SELECT [Disease#1=Flu, Disease#2=Cough] EQ [{Name#1,Name#2}] FROM Ill#1, Ill#2");
}

TEST_F(SpjTest, RunningExampleFails) {
  auto s = tr("Ill(x, Flu) & Ill(x, Cough)");
  EXPECT_TRUE(evaluate(s, db).empty());
  EXPECT_TRUE(evaluate_naive(s, db).empty());
}

TEST_F(SpjTest, DiseaseProjection) {
  EXPECT_EQ(text_rows(run("Ill(n, d)")), sorted({{"Mary", "Cough"}, {"Mary", "BrokenLeg"}, {"Mary", "Sinusitis"},
                                                  {"Pete", "Flu"}}));
  EXPECT_EQ(text_rows(run("exists n: Ill(n, d)")), sorted({{"Cough"}, {"BrokenLeg"}, {"Sinusitis"}, {"Flu"}}));
}

TEST_F(SpjTest, TreatJoin) {
  EXPECT_EQ(text_rows(run("Treat(x, Inhaler) & Ill(x, Cough)")), (TextRows{{"Mary"}}));
}

TEST_F(SpjTest, IdentityQueryIsTheRelation) {
  auto t = evaluate_naive(tr("Ill(a, b)"), db);
  EXPECT_EQ(t.rows, db.at("Ill").rows());
  EXPECT_EQ(t.columns, (std::vector<std::string>{"a", "b"}));
}

TEST_F(SpjTest, BooleanQuery) {
  auto yes = run("exists a: Ill(a, Flu)");
  EXPECT_TRUE(yes.columns.empty());
  EXPECT_EQ(yes.rows.size(), 1u);
  EXPECT_TRUE(run("exists a: Ill(a, Measles)").empty());
}

TEST_F(SpjTest, EmptyRelationFails) {
  auto schemas = load_schema("relation E(A: string)");
  Database d;
  d.add(Relation(schemas[0]));
  EXPECT_TRUE(evaluate(translate(parse_query("E(a)"), d), d).empty());
}

TEST_F(SpjTest, ReconstructRoundTrip) {
  auto q = parse_query("Ill(x, Flu) & Ill(x, Cough)");
  auto s = translate(q, db);
  EXPECT_EQ(reconstruct_atoms(s), q.atoms);
  EXPECT_TRUE(structurally_equal(translate(reconstruct_query(s), db), s));
}

TEST_F(SpjTest, StructuralEqualityIgnoresNames) {
  EXPECT_TRUE(structurally_equal(tr("Ill(x, Flu) & Ill(x, Cough)"), tr("Ill(z, Flu) & Ill(z, Cough)")));
  EXPECT_FALSE(structurally_equal(tr("Ill(x, Flu) & Ill(x, Cough)"), tr("Ill(x, Flu) & Ill(y, Cough)")));
  EXPECT_FALSE(structurally_equal(tr("Ill(x, Flu)"), tr("exists x: Ill(x, Flu)")));
}

TEST_F(SpjTest, InvariantCheckerRejectsForeignAttribute) {
  auto s = tr("Ill(x, Flu)");
  s.selections.push_back({OccAttr{9, 0, "Name"}, Value("Mary")});
  EXPECT_THROW(check_invariants(s), Error);
}

}  // namespace
}  // namespace cqrelax
