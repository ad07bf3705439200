#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>

#include "core/errors.hpp"
#include "test_util.hpp"
#include "text/lexicon.hpp"
#include "text/markup.hpp"
#include "text/tokenize.hpp"

using namespace newsdesk;
using testutil::TempDir;

TEST_CASE("tokenize splits on non-letters and lowercases") {
  auto t = tokenize("Hello, World! it's 2024");
  CHECK(t == std::vector<std::string>{"hello", "world", "it", "s"});
  CHECK(tokenize("").empty());
  // Accented words stay whole.
  auto fr = tokenize("d\xC3\xA9j\xC3\xA0 vu");
  REQUIRE(fr.size() == 2);
  CHECK(fr[1] == "vu");
}

TEST_CASE("porter stemmer step examples") {
  CHECK(porter_stem("caresses") == "caress");
  CHECK(porter_stem("ponies") == "poni");
  CHECK(porter_stem("ties") == "ti");
  CHECK(porter_stem("caress") == "caress");
  CHECK(porter_stem("cats") == "cat");
  CHECK(porter_stem("feed") == "feed");
  CHECK(porter_stem("agreed") == "agre");
  CHECK(porter_stem("plastered") == "plaster");
  CHECK(porter_stem("bled") == "bled");
  CHECK(porter_stem("motoring") == "motor");
  CHECK(porter_stem("sing") == "sing");
  CHECK(porter_stem("happy") == "happi");
  CHECK(porter_stem("sky") == "sky");
  CHECK(porter_stem("hopping") == "hop");
  CHECK(porter_stem("falling") == "fall");
  // Very short and non-ASCII words pass through.
  CHECK(porter_stem("go") == "go");
  CHECK(porter_stem("caf\xC3\xA9") == "caf\xC3\xA9");
}

TEST_CASE("entity decoding") {
  CHECK(decode_entities("a&amp;b") == "a&b");
  CHECK(decode_entities("&lt;p&gt;") == "<p>");
  CHECK(decode_entities("x&#65;y") == "xAy");
  CHECK(decode_entities("&#xe9;") == "\xC3\xA9");
  CHECK(decode_entities("lone & ampersand") == "lone & ampersand");
}

TEST_CASE("markup parsing basics") {
  auto root = parse_markup("<html><body><p>Hello <b>world</b>.</p></body></html>");
  const auto* html = root.child("html");
  REQUIRE(html);
  const auto* body = html->child("body");
  REQUIRE(body);
  CHECK(normalize_ws(body->all_text()) == "Hello world.");
}

TEST_CASE("markup recovers from tag soup") {
  auto root = parse_markup("<div><p>one<p>two</div><span>three");
  CHECK(normalize_ws(root.all_text()) == "one two three");
}

TEST_CASE("script and style content excluded from text") {
  auto root = parse_markup(
      "<body><script>var x = '<p>';</script><style>p{}</style><p>hi</p></body>");
  CHECK(normalize_ws(root.all_text()) == "hi");
}

TEST_CASE("cdata is literal text") {
  auto root = parse_markup("<title><![CDATA[a < b & c]]></title>");
  CHECK(root.child("title")->all_text() == "a < b & c");
}

TEST_CASE("attributes parse with and without quotes") {
  auto root = parse_markup(
      "<link rel=\"alternate\" type='application/rss+xml' href=/feed>");
  const auto* link = root.child("link");
  REQUIRE(link);
  CHECK(link->attr("rel") == "alternate");
  CHECK(link->attr("type") == "application/rss+xml");
  CHECK(link->attr("href") == "/feed");
}

TEST_CASE("lexicon file round trip") {
  TempDir dir;
  auto path = (dir.path / "lex.txt").string();
  {
    std::ofstream out(path);
    out << "# mood words\n";
    out << "Happy\t2.5\n";
    out << "glad\n";
  }
  auto lex = Lexicon::load(path, "joy");
  CHECK(lex.name == "joy");
  CHECK(lex.weight("happy") == 2.5);
  CHECK(lex.weight("glad") == 1.0);
  CHECK(lex.weight("sad") == 0.0);

  auto stemmed = lex.stemmed();
  CHECK(stemmed.weight("happi") == 2.5);

  CHECK_THROWS_AS(Lexicon::load((dir.path / "missing.txt").string()), ParseError);
}

TEST_CASE("linear model file round trip") {
  TempDir dir;
  auto path = (dir.path / "m.model").string();
  LinearModel m;
  m.weights = {{"goal", 1.5}, {"match", -0.25}};
  m.bias = -1.0;
  m.threshold = 0.5;
  m.save(path);

  auto loaded = LinearModel::load(path, "sports");
  CHECK(loaded.weights == m.weights);
  CHECK(loaded.bias == doctest::Approx(-1.0));
  CHECK(loaded.threshold == doctest::Approx(0.5));
  CHECK_THROWS_AS(LinearModel::load((dir.path / "no.model").string()),
                  MissingModel);
}

TEST_CASE("gazetteer file parsing") {
  TempDir dir;
  auto path = (dir.path / "gaz.tsv").string();
  {
    std::ofstream out(path);
    out << "Paris\t48.85\t2.35\t2100000\tFrance\n";
    out << "Paris\t33.66\t-95.55\t25000\tTexas\n";
  }
  auto gaz = load_gazetteer(path);
  REQUIRE(gaz.size() == 2);
  CHECK(gaz[0].population == 2100000);
  CHECK(gaz[1].region == "Texas");
}
