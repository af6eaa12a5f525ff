#include <gtest/gtest.h>

#include <set>
#include <sstream>

#include "wugbench/corpus.hpp"
#include "wugbench/error.hpp"

using namespace wugbench;
using namespace wugbench::corpus;

namespace {

Dataset parse(const std::string& text, std::optional<Language> lang = std::nullopt, Alphabet* a = nullptr) {
  std::istringstream in(text);
  return parse_dataset(in, lang, a);
}

WugSet parse_wugs(const std::string& text) {
  std::istringstream in(text);
  return parse_wug_file(in);
}

std::vector<InflectionExample> synthetic(std::size_t regular, std::size_t irregular) {
  std::vector<InflectionExample> out;
  for (std::size_t i = 0; i < regular + irregular; ++i) {
    const bool reg = i < regular;
    out.push_back({"w" + std::to_string(i), "w" + std::to_string(i) + "ed", {"PST"},
                   reg ? InflectionClass::kRegular : InflectionClass::kIrregular});
  }
  return out;
}

}  // namespace

TEST(Symbols, SplitsUtf8CodePoints) {
  EXPECT_EQ(split_symbols("häuser"), (std::vector<std::string>{"h", "ä", "u", "s", "e", "r"}));
  EXPECT_EQ(split_symbols("ʃɪp"), (std::vector<std::string>{"ʃ", "ɪ", "p"}));
  EXPECT_THROW(split_symbols("\xC3"), ValidationError);
}

TEST(Alphabet, ReservedIdsAndInsertionOrder) {
  Alphabet a;
  EXPECT_EQ(a.size(), 3u);
  EXPECT_EQ(a.add_tag("PST"), 3);
  EXPECT_EQ(a.add_character("k"), 4);
  EXPECT_EQ(a.add_character("k"), 4);
  EXPECT_EQ(a.add_character("i"), 5);
  EXPECT_EQ(a.output_symbols(), (std::vector<SymbolId>{Alphabet::kEos, 4, 5}));
  EXPECT_EQ(a.output_index(5), 2);
  EXPECT_EQ(a.output_index(3), -1);
  EXPECT_EQ(a.kind(3), SymbolKind::kTag);
  try {
    a.id("z");
    FAIL();
  } catch (const EncodingError& e) {
    EXPECT_EQ(e.symbol(), "z");
  }
  EXPECT_EQ(Alphabet::from_json(a.to_json()), a);
}

TEST(Alphabet, SymbolCannotBeBothTagAndCharacter) {
  Alphabet a;
  a.add_tag("PL");
  EXPECT_THROW(a.add_character("PL"), Error);
}

TEST(Encode, SourceIsTagsThenCharacters) {
  Alphabet a;
  a.add_tag("PL");
  a.add_tag("NEUT");
  for (auto c : {"h", "u", "n", "d"}) a.add_character(c);
  const std::vector<std::string> tags{"PL", "NEUT"};
  EXPECT_EQ(encode_source(a, "hund", tags), (std::vector<SymbolId>{3, 4, 5, 6, 7, 8}));
  EXPECT_EQ(decode_symbols(a, encode_target(a, "dun")), "dun");
  EXPECT_THROW(encode_target(a, "PL"), EncodingError);
}

TEST(Dataset, ParsesAndFillsAlphabet) {
  Alphabet a;
  const Dataset d = parse("# lang=en columns=lemma,form,tags,class\nwalk\twalked\tPST\tregular\ngo\twent\tPST\tirregular\n",
                          Language::kEnglish, &a);
  ASSERT_EQ(d.examples.size(), 2u);
  EXPECT_EQ(d.examples[1].inflection_class, InflectionClass::kIrregular);
  EXPECT_TRUE(a.find("PST").has_value());
  EXPECT_TRUE(a.find("w").has_value());
  EXPECT_EQ(parse(serialize_dataset(d)).examples, d.examples);
}

TEST(Dataset, GermanClassInferredFromSuffix) {
  const Dataset d = parse("# lang=de columns=lemma,form,tags\nHund\tHunde\tPL;MASC\nHaus\tHäuser\tPL;NEUT\n");
  EXPECT_EQ(d.examples[0].inflection_class, InflectionClass::kE);
  EXPECT_EQ(d.examples[1].inflection_class, InflectionClass::kEr);
  EXPECT_EQ(d.examples[1].tags, (std::vector<std::string>{"PL", "NEUT"}));
}

TEST(Dataset, ErrorsCarryLineNumbers) {
  try {
    parse("# lang=en columns=lemma,form,tags,class\nwalk\twalked\tPST\tregular\nbroken line\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  EXPECT_THROW(parse("walk\twalked\tPST\n"), ParseError);
  EXPECT_THROW(parse("# lang=en columns=lemma,form,tags\nwalk\twalked\tPST\n"), Error);  // English needs a class
  EXPECT_THROW(parse("# lang=de columns=lemma,form,tags\nx\ty\tPL\n", Language::kEnglish), Error);
}

TEST(GermanClassifier, SuffixPriorityAndUmlauts) {
  EXPECT_EQ(classify_german_suffix("Lehrer", "Lehrer"), InflectionClass::kZero);
  EXPECT_EQ(classify_german_suffix("Apfel", "Äpfel"), InflectionClass::kZero);
  EXPECT_EQ(classify_german_suffix("Auto", "Autos"), InflectionClass::kS);
  EXPECT_EQ(classify_german_suffix("Kind", "Kinder"), InflectionClass::kEr);
  EXPECT_EQ(classify_german_suffix("Haus", "Häuser"), InflectionClass::kEr);
  EXPECT_EQ(classify_german_suffix("Frau", "Frauen"), InflectionClass::kEn);
  EXPECT_EQ(classify_german_suffix("Blume", "Blumen"), InflectionClass::kEn);
  EXPECT_EQ(classify_german_suffix("Hund", "Hunde"), InflectionClass::kE);
  EXPECT_EQ(classify_german_suffix("Baum", "Bäume"), InflectionClass::kE);
  EXPECT_EQ(classify_german_suffix("Museum", "Museen"), InflectionClass::kOther);
  EXPECT_EQ(classify_german_suffix("Hund", ""), InflectionClass::kOther);
}

TEST(Split, RoundsPerStratumAndPreservesFileOrder) {
  const auto data = synthetic(95, 5);
  const DatasetSplit s = split_dataset(data, {}, 3, true);
  EXPECT_EQ(s.train.size() + s.dev.size() + s.test.size(), 100u);
  auto count = [](const std::vector<InflectionExample>& v, InflectionClass c) {
    return std::count_if(v.begin(), v.end(), [&](const auto& e) { return e.inflection_class == c; });
  };
  // 95 regular: dev = test = floor(9.5 + 0.5) = 10; 5 irregular: floor(0.5 + 0.5) = 1.
  EXPECT_EQ(count(s.dev, InflectionClass::kRegular), 10);
  EXPECT_EQ(count(s.dev, InflectionClass::kIrregular), 1);
  EXPECT_EQ(count(s.test, InflectionClass::kIrregular), 1);
  EXPECT_EQ(count(s.train, InflectionClass::kIrregular), 3);
  auto ordered = [&](const std::vector<InflectionExample>& v) {
    std::vector<std::size_t> pos;
    for (const auto& e : v) pos.push_back(std::stoul(e.lemma.substr(1)));
    return std::is_sorted(pos.begin(), pos.end());
  };
  EXPECT_TRUE(ordered(s.train) && ordered(s.dev) && ordered(s.test));
  std::set<std::string> all;
  for (const auto* part : {&s.train, &s.dev, &s.test}) {
    for (const auto& e : *part) EXPECT_TRUE(all.insert(e.lemma).second);
  }
}

TEST(Split, DeterministicPerSeed) {
  const auto data = synthetic(50, 10);
  const auto a = split_dataset(data, {}, 7, true);
  const auto b = split_dataset(data, {}, 7, true);
  const auto c = split_dataset(data, {}, 8, true);
  EXPECT_EQ(a.dev, b.dev);
  EXPECT_EQ(a.test, b.test);
  EXPECT_NE(a.dev, c.dev);
}

TEST(Split, RejectsBadRatios) {
  const auto data = synthetic(5, 0);
  EXPECT_THROW(split_dataset(data, {0.5, 0.5, 0.5}, 1, false), ConfigError);
  EXPECT_THROW(split_dataset({}, {}, 1, false), ConfigError);
}

TEST(Wugs, ParsesContextsAndValidates) {
  const WugSet w = parse_wugs(
      "# lang=de rating_scale=1,5\n"
      "Bral\tBrale\te\t3.5\t0.4\tR\n"
      "Bral\tBralen\ten\t2.0\t0.6\tR\n"
      "Pind\tPinds\ts\t1.0\t1.0\tNR\n");
  EXPECT_EQ(w.language, Language::kGerman);
  EXPECT_EQ(w.lemmas(), (std::vector<std::string>{"Bral", "Pind"}));
  EXPECT_EQ(w.context_of("Pind"), "NR");
  EXPECT_EQ(w.candidates[1].inflection_class, InflectionClass::kEn);
  EXPECT_THROW(parse_wugs("# lang=en rating_scale=1,7\nx\txed\tregular\t9\t0.5\n"), ValidationError);
  EXPECT_THROW(parse_wugs("# lang=en rating_scale=1,7\nx\txed\tregular\t5\t0.7\nx\ty\tirregular\t5\t0.7\n"),
               ValidationError);
  EXPECT_THROW(parse_wugs("# lang=en\nx\txed\tregular\t5\t0.7\n"), ParseError);
}

TEST(Classes, InventoriesPerLanguage) {
  EXPECT_EQ(class_inventory(Language::kEnglish).size(), 2u);
  EXPECT_EQ(class_inventory(Language::kGerman).size(), 6u);
  EXPECT_EQ(rated_classes(Language::kGerman).size(), 5u);
  EXPECT_EQ(parse_class("/-(e)n/"), InflectionClass::kEn);
  EXPECT_EQ(parse_class("zero"), InflectionClass::kZero);
  EXPECT_EQ(wug_tags(Language::kGerman), (std::vector<std::string>{"PL", "NEUT"}));
}
