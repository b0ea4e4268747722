#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>

#include "harness.hpp"
#include "oracles.hpp"
#include "refaware/detector.hpp"
#include "refaware/error.hpp"
#include "refaware/go_adapter.hpp"
#include "scenarios.hpp"

using namespace refaware;
namespace sc = refaware::testing::scenarios;
namespace oracle = refaware::testing::oracle;

namespace {

FileChange modified(const std::string& path, const std::string& before, const std::string& after) {
  return {path, path, FileStatus::kModified, before, after, false};
}

std::vector<std::string> kinds(const std::vector<Refactoring>& rs) {
  std::vector<std::string> out;
  for (const auto& r : rs) out.push_back(to_string(r.kind));
  return out;
}

TokenBag bag(std::initializer_list<std::pair<const std::string, int>> items) {
  return TokenBag(TokenBag::Counts(items.begin(), items.end()));
}

TokenBag random_bag(std::mt19937& rng) {
  std::uniform_int_distribution<int> tok(0, 7), cnt(0, 3);
  TokenBag b;
  for (int i = 0; i < 6; ++i) {
    int c = cnt(rng);
    if (c) b.add("t" + std::to_string(tok(rng)), c);
  }
  return b;
}

std::map<std::string, int> plain(const TokenBag& b) { return {b.counts().begin(), b.counts().end()}; }

}  // namespace

TEST(IdfWeights, FormulaValues) {
  std::vector<TokenBag> bags(10);
  for (auto& b : bags) b.add("common");
  bags[3].add("rare");
  bags[0].add("mid");
  bags[1].add("mid");
  std::vector<const TokenBag*> corpus;
  for (const auto& b : bags) corpus.push_back(&b);
  TokenWeights w = idf_weights(corpus, 1.0);
  EXPECT_NEAR(w.weight("common"), std::log(1.0 + 10.0 / 11.0), 1e-12);
  EXPECT_NEAR(w.weight("common"), 0.6466, 5e-5);
  EXPECT_NEAR(w.weight("rare"), std::log(6.0), 1e-12);
  EXPECT_NEAR(w.weight("rare"), 1.7918, 5e-5);
  EXPECT_GT(w.weight("rare"), w.weight("mid"));
  EXPECT_GT(w.weight("mid"), w.weight("common"));
  EXPECT_NEAR(w.weight("never-seen"), std::log(11.0), 1e-12);
}

TEST(Similarity, Examples) {
  TokenWeights unit = unit_weights();
  TokenBag a = bag({{"x", 2}, {"y", 1}});
  TokenBag b = bag({{"x", 1}, {"y", 1}, {"z", 1}});
  EXPECT_DOUBLE_EQ(similarity(a, b, unit), 0.5);
  EXPECT_DOUBLE_EQ(similarity(a, a, unit), 1.0);
  EXPECT_DOUBLE_EQ(similarity(a, bag({{"q", 4}}), unit), 0.0);
  EXPECT_DOUBLE_EQ(similarity(TokenBag{}, TokenBag{}, unit), 1.0);
}

TEST(Similarity, MatchesOracleAndIsSymmetricBoundedScaleFree) {
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> wd(0.1, 3.0);
  for (int iter = 0; iter < 500; ++iter) {
    TokenBag a = random_bag(rng), b = random_bag(rng);
    std::map<std::string, double, std::less<>> wm;
    std::map<std::string, double> wplain;
    for (int t = 0; t < 8; ++t) {
      double v = wd(rng);
      wm["t" + std::to_string(t)] = v;
      wplain["t" + std::to_string(t)] = v;
    }
    TokenWeights w(wm, 1.0);
    auto scaled = wm;
    for (auto& [_, v] : scaled) v *= 7.25;
    TokenWeights w7(scaled, 7.25);

    double s = similarity(a, b, w);
    EXPECT_NEAR(s, oracle::weighted_jaccard(plain(a), plain(b), wplain), 1e-12);
    EXPECT_DOUBLE_EQ(s, similarity(b, a, w));
    EXPECT_NEAR(s, similarity(a, b, w7), 1e-12);
    EXPECT_GE(s, 0.0);
    EXPECT_LE(s, 1.0);
    if (!a.empty()) {
      EXPECT_DOUBLE_EQ(similarity(a, a, w), 1.0);
    }
    if (s == 1.0) {
      EXPECT_EQ(a, b);
    }
  }
}

TEST(MatchElements, UnchangedFileMatchesItself) {
  GoAdapter go;
  auto elems = go.parse("a.go", sc::kMoveA_Before);
  auto matches = match_elements(elems, elems, DetectorConfig{});
  ASSERT_EQ(matches.size(), elems.size());
  for (const auto& m : matches) {
    EXPECT_EQ(m.before->qualified_name, m.after->qualified_name);
    EXPECT_DOUBLE_EQ(m.similarity, 1.0);
  }
}

TEST(MatchElements, MovedFunctionMatchesAcrossFiles) {
  GoAdapter go;
  std::vector<CodeElement> before = go.parse("A.go", sc::kMoveA_Before);
  auto b2 = go.parse("B.go", sc::kMoveB_Before);
  before.insert(before.end(), b2.begin(), b2.end());
  std::vector<CodeElement> after = go.parse("A.go", sc::kMoveA_After);
  auto a2 = go.parse("B.go", sc::kMoveB_After);
  after.insert(after.end(), a2.begin(), a2.end());
  auto matches = match_elements(before, after, DetectorConfig{});
  int cross = 0;
  for (const auto& m : matches) {
    if (m.before->file_path != m.after->file_path) {
      ++cross;
      EXPECT_EQ(m.before->qualified_name, "A.go::m1(int)");
      EXPECT_EQ(m.after->qualified_name, "B.go::m1(int)");
    }
  }
  EXPECT_EQ(cross, 1);
}

TEST(MatchElements, TieGoesToNearerLineAndAgreesWithExhaustiveOracle) {
  GoAdapter go;
  const std::string body = "(v int) int {\n\tw := v * 31\n\tfmt.Println(\"tally\", w)\n\treturn w\n}\n";
  std::string before_src = "package t\n\n";
  for (int i = 0; i < 8; ++i) before_src += "\n";
  before_src += "func gone" + body;  // line 11
  std::string after_src = "package t\n\n";
  for (int i = 0; i < 10; ++i) after_src += "\n";
  after_src += "func copyOne" + body;  // line 13
  for (int i = 0; i < 20; ++i) after_src += "\n";
  after_src += "func copyTwo" + body;  // line 38

  auto before = go.parse("t.go", before_src);
  auto after = go.parse("t.go", after_src);
  DetectorConfig cfg;
  auto first = match_elements(before, after, cfg);
  auto second = match_elements(before, after, cfg);

  const ElementMatch* fn = nullptr;
  for (const auto& m : first) {
    if (m.before->name == "gone") fn = &m;
  }
  ASSERT_NE(fn, nullptr);
  EXPECT_EQ(fn->after->name, "copyOne");
  ASSERT_EQ(first.size(), second.size());
  for (std::size_t i = 0; i < first.size(); ++i) {
    EXPECT_EQ(first[i].before->qualified_name, second[i].before->qualified_name);
    EXPECT_EQ(first[i].after->qualified_name, second[i].after->qualified_name);
  }

  // The two candidates really are tied, and greedy reaches the optimum.
  std::vector<const TokenBag*> corpus;
  for (const auto& e : before) corpus.push_back(&e.tokens);
  for (const auto& e : after) corpus.push_back(&e.tokens);
  TokenWeights w = idf_weights(corpus, cfg.idf_smoothing);
  std::vector<std::vector<double>> score(before.size(), std::vector<double>(after.size(), -1.0));
  for (std::size_t i = 0; i < before.size(); ++i) {
    for (std::size_t j = 0; j < after.size(); ++j) {
      if (before[i].kind == ElementKind::kFunction && after[j].kind == ElementKind::kFunction) score[i][j] = similarity(before[i].tokens, after[j].tokens, w);
    }
  }
  EXPECT_DOUBLE_EQ(score[1][1], score[1][2]);
  double greedy_total = 0;
  for (const auto& m : first) {
    if (m.before->kind == ElementKind::kFunction) greedy_total += m.similarity;
  }
  EXPECT_NEAR(greedy_total, oracle::best_assignment(score, cfg.tau_match), 1e-12);
}

TEST(MatchElements, GreedyIsOptimalOnScriptedCorpus) {
  refaware::testing::ScriptGenerator gen(3);
  DetectorConfig cfg;
  GoAdapter go;
  for (const auto& inst : gen.refactorings(2)) {
    std::vector<CodeElement> before, after;
    for (const auto& [p, c] : inst.before) {
      auto e = go.parse(p, c);
      before.insert(before.end(), e.begin() + 1, e.end());
    }
    for (const auto& [p, c] : inst.after) {
      auto e = go.parse(p, c);
      after.insert(after.end(), e.begin() + 1, e.end());
    }
    std::vector<const TokenBag*> corpus;
    for (const auto& e : before) corpus.push_back(&e.tokens);
    for (const auto& e : after) corpus.push_back(&e.tokens);
    TokenWeights w = idf_weights(corpus, cfg.idf_smoothing);
    std::vector<std::vector<double>> score(before.size(), std::vector<double>(after.size()));
    for (std::size_t i = 0; i < before.size(); ++i) {
      for (std::size_t j = 0; j < after.size(); ++j) score[i][j] = similarity(before[i].tokens, after[j].tokens, w);
    }
    auto matches = match_elements(before, after, w, cfg);
    double total = 0;
    std::set<const CodeElement*> seen;
    for (const auto& m : matches) {
      total += m.similarity;
      EXPECT_TRUE(seen.insert(m.before).second);
      EXPECT_TRUE(seen.insert(m.after).second);
      EXPECT_TRUE(m.similarity >= cfg.tau_match || m.before->qualified_name == m.after->qualified_name);
    }
    EXPECT_NEAR(total, oracle::best_assignment(score, cfg.tau_match), 1e-9) << inst.name;
  }
}

TEST(Detect, MoveWithEdit) {
  auto rs = detect({modified("A.go", sc::kMoveA_Before, sc::kMoveA_After),
                    modified("B.go", sc::kMoveB_Before, sc::kMoveB_After)},
                   DetectorConfig{});
  ASSERT_EQ(kinds(rs), (std::vector<std::string>{"MOVE_FUNCTION"}));
  EXPECT_EQ(rs[0].description, "method m1() moved");
  EXPECT_EQ(rs[0].before_anchor, (Anchor{"A.go", 4}));
  EXPECT_EQ(rs[0].after_anchor, (Anchor{"B.go", 4}));
}

TEST(Detect, ExtractIsEven) {
  auto rs = detect({modified("numbers.go", sc::kExtract_Before, sc::kExtract_After)}, DetectorConfig{});
  ASSERT_EQ(kinds(rs), (std::vector<std::string>{"EXTRACT_FUNCTION"}));
  EXPECT_EQ(rs[0].before_element->name, "m1");
  EXPECT_EQ(rs[0].after_element->name, "isEven");
  ASSERT_TRUE(rs[0].counterpart_element);
  EXPECT_EQ(rs[0].counterpart_element->name, "m1");
  EXPECT_EQ(rs[0].description, "method isEven() extracted from method m1()");
}

TEST(Detect, InlineIsTheMirrorOfExtract) {
  auto rs = detect({modified("numbers.go", sc::kExtract_After, sc::kExtract_Before)}, DetectorConfig{});
  ASSERT_EQ(kinds(rs), (std::vector<std::string>{"INLINE_FUNCTION"}));
  EXPECT_EQ(rs[0].before_element->name, "isEven");
  EXPECT_EQ(rs[0].after_element->name, "m1");
}

TEST(Detect, ExtractNeedsANewCallSite) {
  // Same lines removed and the same function added, but m1 never calls it.
  std::string after = sc::kExtract_After;
  after.replace(after.find("\tisEven(n)\n"), 11, "\tfmt.Println(n)\n");
  EXPECT_TRUE(detect({modified("numbers.go", sc::kExtract_Before, after)}, DetectorConfig{}).empty());
}

TEST(Detect, EditInPlaceIsNotARefactoring) {
  const std::string before = "package p\n\nfunc F(a int) int {\n\treturn a + 1\n}\n";
  const std::string after = "package p\n\nfunc F(a int) int {\n\tb := a * 2\n\treturn b + 1\n}\n";
  EXPECT_TRUE(detect({modified("p.go", before, after)}, DetectorConfig{}).empty());
}

TEST(Detect, PureAdditionsAreSilent) {
  refaware::testing::FixtureRepo repo;
  auto c = sc::pure_additions(repo);
  GitRepository git(repo.path());
  auto rs = detect(git, {git.resolve(c.base), git.resolve(c.head), PairLabel::main()}, DetectorConfig{});
  EXPECT_TRUE(rs.empty());
}

TEST(Detect, RenameOnlyYieldsOneRename) {
  const std::string before =
      "package p\n\nfunc compute(a, b int) int {\n\tsum := a + b\n\treturn sum * 2\n}\n";
  std::string after = before;
  after.replace(after.find("compute"), 7, "doubleSum");
  auto rs = detect({modified("p.go", before, after)}, DetectorConfig{});
  ASSERT_EQ(kinds(rs), (std::vector<std::string>{"RENAME_FUNCTION"}));
  EXPECT_EQ(rs[0].description, "method compute() renamed to doubleSum()");
}

TEST(Detect, ChangeSignatureKeepsName) {
  const std::string before =
      "package p\n\nfunc Scale(v int) int {\n\tout := v * 3\n\tfmt.Println(out)\n\treturn out\n}\n";
  const std::string after =
      "package p\n\nfunc Scale(v int, k int) int {\n\tout := v * 3\n\tfmt.Println(out)\n\treturn out\n}\n";
  auto rs = detect({modified("p.go", before, after)}, DetectorConfig{});
  ASSERT_EQ(kinds(rs), (std::vector<std::string>{"CHANGE_SIGNATURE"}));
}

TEST(Detect, MethodMovedToAnotherReceiver) {
  const std::string before =
      "package p\n\ntype A struct{}\ntype B struct{}\n\n"
      "func (a A) Describe(x int) string {\n\treturn fmt.Sprintf(\"item %d of list\", x)\n}\n";
  const std::string after =
      "package p\n\ntype A struct{}\ntype B struct{}\n\n"
      "func (b B) Describe(x int) string {\n\treturn fmt.Sprintf(\"item %d of list\", x)\n}\n";
  auto rs = detect({modified("p.go", before, after)}, DetectorConfig{});
  ASSERT_EQ(kinds(rs), (std::vector<std::string>{"MOVE_FUNCTION"}));
}

TEST(Detect, MoveAndRename) {
  const std::string a_before =
      "package p\n\nfunc helper(x int) int {\n\ty := x * 17\n\tfmt.Println(\"helper ran\", y)\n\treturn y\n}\n";
  const std::string b_before = "package p\n";
  const std::string b_after =
      "package p\n\nfunc assist(x int) int {\n\ty := x * 17\n\tfmt.Println(\"helper ran\", y)\n\treturn y\n}\n";
  auto rs = detect({modified("a.go", a_before, "package p\n"), modified("b.go", b_before, b_after)},
                   DetectorConfig{});
  ASSERT_EQ(kinds(rs), (std::vector<std::string>{"MOVE_AND_RENAME_FUNCTION"}));
}

TEST(Detect, TypesRenameAndMove) {
  const std::string type_src = " struct {\n\tlabel string\n\tweight float64\n\tparts []int\n}\n";
  auto renamed = detect({modified("t.go", "package p\n\ntype Box" + type_src, "package p\n\ntype Crate" + type_src)},
                        DetectorConfig{});
  EXPECT_EQ(kinds(renamed), (std::vector<std::string>{"RENAME_TYPE"}));
  auto moved = detect({modified("t.go", "package p\n\ntype Box" + type_src, "package p\n"),
                       modified("u.go", "package p\n", "package p\n\ntype Box" + type_src)},
                      DetectorConfig{});
  EXPECT_EQ(kinds(moved), (std::vector<std::string>{"MOVE_TYPE"}));
}

TEST(Detect, RenamedFileIsOneMoveFile) {
  const std::string src =
      "package p\n\ntype Cfg struct{ n int }\n\nfunc (c Cfg) Size() int {\n\treturn c.n * 4\n}\n";
  FileChange fc{std::string("old/cfg.go"), std::string("new/cfg.go"), FileStatus::kRenamed, src, src, false};
  auto rs = detect({fc}, DetectorConfig{});
  ASSERT_EQ(kinds(rs), (std::vector<std::string>{"MOVE_FILE"}));
  EXPECT_EQ(rs[0].description, "file old/cfg.go moved to new/cfg.go");
}

TEST(Detect, ElevenScriptedRefactoringsInOneChangeSet) {
  refaware::testing::ScriptGenerator gen(11);
  auto all = gen.refactorings(3);  // 15 instances, 3 per kind
  std::vector<refaware::testing::ScriptedInstance> parts(all.begin(), all.begin() + 11);
  auto merged = refaware::testing::merge(parts);
  auto rs = detect(refaware::testing::to_changes(merged), DetectorConfig{});
  ASSERT_EQ(rs.size(), 11u);
  std::multiset<std::string> expected, got;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    expected.insert(to_string(parts[i].kind) + " s" + std::to_string(i) + " " + parts[i].before_name + ">" +
                    parts[i].after_name);
  }
  for (const auto& r : rs) {
    std::string dir = r.after_anchor.file_path.substr(0, r.after_anchor.file_path.find('/'));
    got.insert(to_string(r.kind) + " " + dir + " " + r.before_element->name + ">" + r.after_element->name);
  }
  EXPECT_EQ(got, expected);
}

TEST(Detect, NeverEmitsHierarchyKindsAndKeepsRolesApart) {
  refaware::testing::ScriptGenerator gen(5);
  for (const auto& inst : gen.refactorings(4)) {
    auto rs = detect(refaware::testing::to_changes(inst), DetectorConfig{});
    std::set<std::string> moved, sources;
    for (const auto& r : rs) {
      EXPECT_NE(r.kind, RefactoringKind::kPullUp);
      EXPECT_NE(r.kind, RefactoringKind::kPushDown);
      if (is_move(r.kind)) moved.insert(r.before_element->qualified_name);
      if (r.kind == RefactoringKind::kExtractFunction) sources.insert(r.before_element->qualified_name);
    }
    for (const auto& s : sources) EXPECT_FALSE(moved.count(s)) << inst.name;
  }
}

TEST(Detect, IsDeterministic) {
  refaware::testing::ScriptGenerator gen(8);
  auto merged = refaware::testing::merge(gen.refactorings(2));
  auto changes = refaware::testing::to_changes(merged);
  auto a = detect(changes, DetectorConfig{});
  auto b = detect(changes, DetectorConfig{});
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].kind, b[i].kind);
    EXPECT_EQ(a[i].before_anchor, b[i].before_anchor);
    EXPECT_EQ(a[i].after_anchor, b[i].after_anchor);
    EXPECT_EQ(a[i].similarity, b[i].similarity);
  }
}

TEST(DetectorConfig, JsonKeysAndValidation) {
  auto cfg = DetectorConfig::from_json(nlohmann::json::parse(R"({"tau_match": 0.7, "min_extract_tokens": 12})"));
  EXPECT_DOUBLE_EQ(cfg.tau_match, 0.7);
  EXPECT_EQ(cfg.min_extract_tokens, 12);
  EXPECT_DOUBLE_EQ(cfg.tau_extract, 0.6);
  EXPECT_EQ(DetectorConfig::from_json(cfg.to_json()), cfg);

  auto rejects = [](const char* text, const std::string& key) {
    try {
      DetectorConfig::from_json(nlohmann::json::parse(text)).validate();
      ADD_FAILURE() << text;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kValidationError);
      EXPECT_EQ(e.path(), key) << text;
    }
  };
  rejects(R"({"tau_match": 0})", "tau_match");
  rejects(R"({"tau_extract": 1.5})", "tau_extract");
  rejects(R"({"min_extract_tokens": 0})", "min_extract_tokens");
  rejects(R"({"idf_smoothing": -1})", "idf_smoothing");
  rejects(R"({"tau": 0.5})", "tau");
}

TEST(RefactoringKindNames, RoundTrip) {
  for (auto k : {RefactoringKind::kMoveFunction, RefactoringKind::kMoveAndRenameFunction, RefactoringKind::kMoveType,
                 RefactoringKind::kMoveFile, RefactoringKind::kExtractFunction, RefactoringKind::kInlineFunction,
                 RefactoringKind::kRenameFunction, RefactoringKind::kRenameType, RefactoringKind::kChangeSignature,
                 RefactoringKind::kPullUp, RefactoringKind::kPushDown}) {
    EXPECT_EQ(refactoring_kind_from_string(to_string(k)), k);
  }
  EXPECT_EQ(display_name(RefactoringKind::kMoveFunction), "Move Function");
}
