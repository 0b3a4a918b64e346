#include <doctest.h>

#include <filesystem>
#include <random>

#include "graphfam/graph.hpp"
#include "test_util.hpp"

using namespace graphfam;

namespace {

const std::string kTwoVertexJson = R"({
  "label": "sample1",
  "vertices": [
    {"name": "sub_1", "kind": "local"},
    {"name": "CreateFileA", "kind": "external"}
  ],
  "edges": [[0, 1]]
})";

}  // namespace

TEST_CASE("json parse builds the expected graph") {
  const CallGraph g = parse_graph(kTwoVertexJson);
  CHECK(g.label() == "sample1");
  CHECK(g.order() == 2);
  CHECK(g.size() == 1);
  CHECK(g.vertex(0).name == "sub_1");
  CHECK(g.vertex(0).kind == FunctionKind::Local);
  CHECK(g.vertex(1).name == "CreateFileA");
  CHECK(g.vertex(1).kind == FunctionKind::External);
  CHECK(g.has_edge(0, 1));
  CHECK_FALSE(g.has_edge(1, 0));
  CHECK(graph_stats(g) == GraphStats{2, 1, 1, 1});
}

TEST_CASE("null graph parses and reports zero stats") {
  const CallGraph g = parse_graph(R"({"label":"empty","vertices":[],"edges":[]})");
  CHECK(g.order() == 0);
  CHECK(g.size() == 0);
  CHECK(g.is_null());
  CHECK(graph_stats(g) == GraphStats{0, 0, 0, 0});
  CHECK(validate_conventions(g).empty());
}

TEST_CASE("duplicate external names are a parse error") {
  const std::string text = R"({
    "label": "dup",
    "vertices": [
      {"name": "ExitProcess", "kind": "external"},
      {"name": "ExitProcess", "kind": "external"}
    ],
    "edges": []
  })";
  CHECK_THROWS_WITH_AS(parse_graph(text),
                       doctest::Contains("duplicate external name \"ExitProcess\""), ParseError);

  SUBCASE("merge flag collapses them and unions edges") {
    const std::string mergeable = R"({
      "label": "dup",
      "vertices": [
        {"name": "sub_1", "kind": "local"},
        {"name": "ExitProcess", "kind": "external"},
        {"name": "ExitProcess", "kind": "external"}
      ],
      "edges": [[0, 1], [0, 2], [2, 2]]
    })";
    ParseOptions opts;
    opts.merge_duplicate_externals = true;
    const CallGraph g = parse_graph(mergeable, opts);
    CHECK(g.order() == 2);
    CHECK(g.size() == 2);  // 0->1 (deduped) and the self loop
    CHECK(g.has_edge(0, 1));
    CHECK(g.has_edge(1, 1));
  }
}

TEST_CASE("malformed input is reported with a position") {
  CHECK_THROWS_AS(parse_graph("{not json"), ParseError);
  CHECK_THROWS_WITH_AS(parse_graph(R"({"label":"x","vertices":[{"name":"a"}],"edges":[]})"),
                       doctest::Contains("vertices[0]"), ParseError);
  CHECK_THROWS_WITH_AS(parse_graph(R"({"label":"x","vertices":[],"edges":[[0,1]]})"),
                       doctest::Contains("outside"), ParseError);
  CHECK_THROWS_WITH_AS(
      parse_graph(R"({"label":"x","vertices":[{"name":"","kind":"local"}],"edges":[]})"),
      doctest::Contains("name must not be empty"), ParseError);
  CHECK_THROWS_WITH_AS(parse_graph(R"({"label":"","vertices":[],"edges":[]})"),
                       doctest::Contains("label"), ParseError);
}

TEST_CASE("parallel edges are silently deduplicated") {
  const CallGraph g = parse_graph(R"({
    "label": "par",
    "vertices": [{"name": "a", "kind": "local"}, {"name": "b", "kind": "local"}],
    "edges": [[0, 1], [0, 1], [0, 1]]
  })");
  CHECK(g.size() == 1);
}

TEST_CASE("self loops are allowed") {
  const CallGraph g = parse_graph(R"({
    "label": "rec",
    "vertices": [{"name": "a", "kind": "local"}],
    "edges": [[0, 0]]
  })");
  CHECK(g.size() == 1);
  CHECK(g.has_edge(0, 0));
}

TEST_CASE("line format parses with re-indexed ids and comments") {
  const std::string text =
      "# a small graph\n"
      "g liner\n"
      "v 10 sub_1 local\n"
      "v 20 CreateFileA external\n"
      "e 10 20\n";
  const CallGraph g = parse_graph(text);
  CHECK(g.label() == "liner");
  CHECK(g.order() == 2);
  CHECK(g.vertex(0).name == "sub_1");
  CHECK(g.has_edge(0, 1));

  SUBCASE("fallback label applies when no g line") {
    ParseOptions opts;
    opts.fallback_label = "from_file";
    const CallGraph h = parse_graph("v 0 a local\n", opts);
    CHECK(h.label() == "from_file");
  }
  SUBCASE("missing label is an error") {
    CHECK_THROWS_AS(parse_graph("v 0 a local\n"), ParseError);
  }
  SUBCASE("unknown vertex in edge names the line") {
    CHECK_THROWS_WITH_AS(parse_graph("g x\nv 0 a local\ne 0 7\n"),
                         doctest::Contains("line 3"), ParseError);
  }
  SUBCASE("duplicate file id is an error") {
    CHECK_THROWS_WITH_AS(parse_graph("g x\nv 0 a local\nv 0 b local\n"),
                         doctest::Contains("duplicate vertex id"), ParseError);
  }
}

TEST_CASE("convention warnings flag external-to-local edges only") {
  const CallGraph g = testutil::make_graph(
      "conv", {{"sub_1", 'l'}, {"CreateFileA", 'e'}, {"sub_2", 'l'}},
      {{0, 1}, {1, 2}, {0, 2}});
  const auto warnings = validate_conventions(g);
  REQUIRE(warnings.size() == 1);
  CHECK(warnings[0].find("CreateFileA") != std::string::npos);
  CHECK(warnings[0].find("sub_2") != std::string::npos);

  const CallGraph ok = testutil::make_graph("ok", {{"a", 'l'}, {"X", 'e'}}, {{0, 1}});
  CHECK(validate_conventions(ok).empty());
}

TEST_CASE("serialize then parse round-trips random graphs") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 50; ++i) {
    const int order = static_cast<int>(rng() % 20);
    const CallGraph g = testutil::random_graph(rng, "rt" + std::to_string(i), order);
    const CallGraph back = parse_graph(serialize_graph(g));
    CHECK(back.label() == g.label());
    CHECK(back.same_structure(g));
  }
}

TEST_CASE("serialization is byte-stable and edge-sorted") {
  const CallGraph g = testutil::make_graph("s", {{"a", 'l'}, {"b", 'l'}}, {{1, 0}, {0, 1}});
  const std::string once = serialize_graph(g);
  CHECK(once == serialize_graph(parse_graph(once)));
  REQUIRE(g.edges().size() == 2);
  CHECK(g.edges()[0] == Edge{0, 1});
  CHECK(g.edges()[1] == Edge{1, 0});
}

TEST_CASE("corpus save and load round-trips with families") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "graphfam_corpus_test";
  fs::remove_all(dir);

  GraphCorpus corpus;
  corpus.graphs.push_back(testutil::make_graph("s1", {{"a", 'l'}, {"X", 'e'}}, {{0, 1}}));
  corpus.graphs.push_back(testutil::make_graph("s2", {{"b", 'l'}}, {}));
  corpus.family_labels = {{{"s1", "famA"}, {"s2", "famB"}}};
  save_corpus(corpus, dir);

  const GraphCorpus back = load_corpus(dir);
  REQUIRE(back.graphs.size() == 2);
  CHECK(back.graphs[0].label() == "s1");
  CHECK(back.graphs[0].same_structure(corpus.graphs[0]));
  REQUIRE(back.family_labels.has_value());
  CHECK(back.family_labels->at("s2") == "famB");

  SUBCASE("family labels must cover exactly the samples") {
    GraphCorpus bad = corpus;
    bad.family_labels->erase("s2");
    CHECK_THROWS_AS(bad.validate(), Error);
    bad.family_labels->emplace("s2", "famB");
    bad.family_labels->emplace("ghost", "famC");
    CHECK_THROWS_AS(bad.validate(), Error);
  }
  SUBCASE("duplicate labels rejected") {
    GraphCorpus bad;
    bad.graphs.push_back(testutil::make_graph("dup", {{"a", 'l'}}, {}));
    bad.graphs.push_back(testutil::make_graph("dup", {{"b", 'l'}}, {}));
    CHECK_THROWS_AS(bad.validate(), Error);
  }
  fs::remove_all(dir);
}
