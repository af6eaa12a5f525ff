#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

namespace wugbench::corpus {

enum class Language { kEnglish, kGerman };

std::string_view to_string(Language language);  // "en" / "de"
Language parse_language(std::string_view text);

enum class InflectionClass { kRegular, kIrregular, kEn, kE, kZero, kEr, kS, kOther };

// Display label: "regular", "/-(e)n/", "/-∅/", ...
std::string_view class_label(InflectionClass c);
// File token: "regular", "en", "zero", ...
std::string_view class_token(InflectionClass c);
// Accepts either the token or the display label (with or without slashes).
InflectionClass parse_class(std::string_view text);

// Every class a prediction can fall into for this language.
std::span<const InflectionClass> class_inventory(Language language);
// Classes that carry human judgments (German drops "other").
std::span<const InflectionClass> rated_classes(Language language);

// Splits UTF-8 text into one string per code point.
std::vector<std::string> split_symbols(std::string_view utf8);

// ---------------------------------------------------------------------------

using SymbolId = int;

enum class SymbolKind { kSpecial, kTag, kCharacter };

// Bijection between symbols and contiguous ids. Ids 0..2 are PAD, BOS, EOS;
// further symbols get the next id in insertion order, so an alphabet built
// from the same file is identical across runs.
class Alphabet {
 public:
  static constexpr SymbolId kPad = 0;
  static constexpr SymbolId kBos = 1;
  static constexpr SymbolId kEos = 2;

  Alphabet();

  SymbolId add_tag(std::string_view symbol);
  SymbolId add_character(std::string_view symbol);

  std::optional<SymbolId> find(std::string_view symbol) const;
  // Throws EncodingError naming the symbol.
  SymbolId id(std::string_view symbol) const;
  const std::string& symbol(SymbolId id) const;
  SymbolKind kind(SymbolId id) const;
  std::size_t size() const noexcept { return symbols_.size(); }

  // Decoder output inventory: EOS followed by every character, in id order.
  const std::vector<SymbolId>& output_symbols() const noexcept { return output_symbols_; }
  // Position of `id` in output_symbols(), or -1.
  int output_index(SymbolId id) const;

  nlohmann::json to_json() const;
  static Alphabet from_json(const nlohmann::json& json);

  friend bool operator==(const Alphabet& a, const Alphabet& b) {
    return a.symbols_ == b.symbols_ && a.kinds_ == b.kinds_;
  }

 private:
  SymbolId add(std::string_view symbol, SymbolKind kind);

  std::vector<std::string> symbols_;
  std::vector<SymbolKind> kinds_;
  std::unordered_map<std::string, SymbolId> index_;
  std::vector<SymbolId> output_symbols_;
  std::vector<int> output_index_;
};

// ---------------------------------------------------------------------------

struct InflectionExample {
  std::string lemma;
  std::string form;
  std::vector<std::string> tags;
  InflectionClass inflection_class = InflectionClass::kOther;

  friend bool operator==(const InflectionExample&, const InflectionExample&) = default;
};

struct Dataset {
  Language language = Language::kEnglish;
  std::vector<InflectionExample> examples;
};

// One human-judged candidate. `context` is "R"/"NR" for German rhyme and
// non-rhyme nonce nouns and empty when the file has no context column.
struct WugCandidate {
  std::string lemma;
  std::string form;
  InflectionClass inflection_class = InflectionClass::kOther;
  double human_rating = 0.0;
  double human_prod_prob = 0.0;
  std::string context;

  friend bool operator==(const WugCandidate&, const WugCandidate&) = default;
};

struct WugSet {
  Language language = Language::kEnglish;
  double rating_min = 0.0;
  double rating_max = 0.0;
  std::vector<WugCandidate> candidates;

  // Distinct lemmas in first-appearance order.
  std::vector<std::string> lemmas() const;
  std::string context_of(std::string_view lemma) const;
};

struct SplitRatios {
  double train = 0.8;
  double dev = 0.1;
  double test = 0.1;
};

struct DatasetSplit {
  std::vector<InflectionExample> train;
  std::vector<InflectionExample> dev;
  std::vector<InflectionExample> test;
  std::uint64_t seed = 0;
};

// Dataset TSV:
//   # lang=<en|de> columns=lemma,form,tags[,class]
//   lemma<TAB>form<TAB>TAG;TAG[<TAB>class]
// German rows without a class get classify_german_suffix(lemma, form);
// English rows must carry one. When `alphabet` is given, every tag and
// character is added to it.
Dataset parse_dataset(std::istream& in, std::optional<Language> expected = std::nullopt,
                      Alphabet* alphabet = nullptr);
Dataset read_dataset(const std::filesystem::path& path, std::optional<Language> expected = std::nullopt,
                     Alphabet* alphabet = nullptr);
// Canonical form: header with the class column, one row per example.
std::string serialize_dataset(const Dataset& dataset);
void write_dataset(const std::filesystem::path& path, const Dataset& dataset);

// Wug TSV:
//   # lang=<en|de> rating_scale=<lo>,<hi>
//   lemma<TAB>form<TAB>class<TAB>rating<TAB>prod_prob[<TAB>context]
// Further lines starting with '#' are comments.
WugSet parse_wug_file(std::istream& in);
WugSet read_wug_file(const std::filesystem::path& path);

void extend_alphabet(Alphabet& alphabet, const Dataset& dataset);

DatasetSplit split_dataset(std::span<const InflectionExample> data, SplitRatios ratios, std::uint64_t seed,
                           bool stratify_irregular);

// Umlaut-insensitive suffix classifier; total. Priority: identical -> /-∅/,
// then "s", "er", "en"/"n", "e" as the exact remainder after the singular,
// otherwise "other".
InflectionClass classify_german_suffix(std::string_view singular, std::string_view plural);
std::string normalize_umlauts(std::string_view text);

// Tag symbols in declared order, then the lemma characters. No BOS/EOS.
std::vector<SymbolId> encode_source(const Alphabet& alphabet, std::string_view lemma,
                                    std::span<const std::string> tags);
// Characters of a target form (no BOS/EOS); every symbol must be a character.
std::vector<SymbolId> encode_target(const Alphabet& alphabet, std::string_view form);
std::string decode_symbols(const Alphabet& alphabet, std::span<const SymbolId> ids);

// Canonical tag list per language: English [PST]; German [PL, NEUT] for the
// neuter wug prompt.
std::vector<std::string> wug_tags(Language language);

}  // namespace wugbench::corpus
