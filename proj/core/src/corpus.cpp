#include "wugbench/corpus.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include "wugbench/error.hpp"
#include "wugbench/nd/rng.hpp"

namespace wugbench::corpus {
namespace {

constexpr std::array kEnglishClasses = {InflectionClass::kRegular, InflectionClass::kIrregular};
constexpr std::array kGermanClasses = {InflectionClass::kEn, InflectionClass::kE,  InflectionClass::kZero,
                                       InflectionClass::kEr, InflectionClass::kS, InflectionClass::kOther};
constexpr std::array kGermanRated = {InflectionClass::kEn, InflectionClass::kE, InflectionClass::kZero,
                                     InflectionClass::kEr, InflectionClass::kS};

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(sep, start);
    out.emplace_back(text.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string_view trim_cr(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

// Parses "# key=value key=value" into a map.
std::map<std::string, std::string> parse_header(std::string_view line, std::size_t line_no) {
  if (line.empty() || line.front() != '#') throw ParseError(line_no, "missing '# lang=...' header");
  std::map<std::string, std::string> fields;
  std::istringstream words{std::string(line.substr(1))};
  std::string word;
  while (words >> word) {
    const auto eq = word.find('=');
    if (eq == std::string::npos) throw ParseError(line_no, "header field '" + word + "' is not key=value");
    fields[word.substr(0, eq)] = word.substr(eq + 1);
  }
  return fields;
}

double parse_number(std::string_view text, std::size_t line_no, const char* what) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(value)) {
    throw ParseError(line_no, std::string(what) + " '" + std::string(text) + "' is not a number");
  }
  return value;
}

}  // namespace

std::string_view to_string(Language language) { return language == Language::kEnglish ? "en" : "de"; }

Language parse_language(std::string_view text) {
  if (text == "en") return Language::kEnglish;
  if (text == "de") return Language::kGerman;
  throw ConfigError("unknown language '" + std::string(text) + "' (expected en or de)");
}

std::string_view class_label(InflectionClass c) {
  switch (c) {
    case InflectionClass::kRegular: return "regular";
    case InflectionClass::kIrregular: return "irregular";
    case InflectionClass::kEn: return "/-(e)n/";
    case InflectionClass::kE: return "/-e/";
    case InflectionClass::kZero: return "/-\xE2\x88\x85/";
    case InflectionClass::kEr: return "/-er/";
    case InflectionClass::kS: return "/-s/";
    case InflectionClass::kOther: return "other";
  }
  return "other";
}

std::string_view class_token(InflectionClass c) {
  switch (c) {
    case InflectionClass::kRegular: return "regular";
    case InflectionClass::kIrregular: return "irregular";
    case InflectionClass::kEn: return "en";
    case InflectionClass::kE: return "e";
    case InflectionClass::kZero: return "zero";
    case InflectionClass::kEr: return "er";
    case InflectionClass::kS: return "s";
    case InflectionClass::kOther: return "other";
  }
  return "other";
}

InflectionClass parse_class(std::string_view text) {
  std::string key(text);
  if (key.size() >= 2 && key.front() == '/' && key.back() == '/') key = key.substr(1, key.size() - 2);
  if (key.rfind("-", 0) == 0) key = key.substr(1);
  static const std::map<std::string, InflectionClass, std::less<>> kByName = {
      {"regular", InflectionClass::kRegular}, {"reg", InflectionClass::kRegular},
      {"irregular", InflectionClass::kIrregular}, {"irreg", InflectionClass::kIrregular},
      {"en", InflectionClass::kEn},           {"(e)n", InflectionClass::kEn},
      {"e", InflectionClass::kE},             {"zero", InflectionClass::kZero},
      {"\xE2\x88\x85", InflectionClass::kZero}, {"er", InflectionClass::kEr},
      {"s", InflectionClass::kS},             {"other", InflectionClass::kOther},
  };
  const auto it = kByName.find(key);
  if (it == kByName.end()) throw ValidationError("unknown inflection class '" + std::string(text) + "'");
  return it->second;
}

std::span<const InflectionClass> class_inventory(Language language) {
  if (language == Language::kEnglish) return kEnglishClasses;
  return kGermanClasses;
}

std::span<const InflectionClass> rated_classes(Language language) {
  if (language == Language::kEnglish) return kEnglishClasses;
  return kGermanRated;
}

std::vector<std::string> split_symbols(std::string_view utf8) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < utf8.size();) {
    const auto lead = static_cast<unsigned char>(utf8[i]);
    std::size_t len = 1;
    if (lead >= 0xF0) {
      len = 4;
    } else if (lead >= 0xE0) {
      len = 3;
    } else if (lead >= 0xC0) {
      len = 2;
    }
    if (i + len > utf8.size()) throw ValidationError("truncated UTF-8 sequence in '" + std::string(utf8) + "'");
    out.emplace_back(utf8.substr(i, len));
    i += len;
  }
  return out;
}

// ---------------------------------------------------------------------------

Alphabet::Alphabet() {
  add("<pad>", SymbolKind::kSpecial);
  add("<s>", SymbolKind::kSpecial);
  add("</s>", SymbolKind::kSpecial);
}

SymbolId Alphabet::add(std::string_view symbol, SymbolKind kind) {
  if (const auto it = index_.find(std::string(symbol)); it != index_.end()) {
    if (kinds_[it->second] != kind) {
      throw ValidationError("symbol '" + std::string(symbol) + "' used both as a tag and as a character");
    }
    return it->second;
  }
  const auto id = static_cast<SymbolId>(symbols_.size());
  symbols_.emplace_back(symbol);
  kinds_.push_back(kind);
  index_.emplace(symbol, id);
  output_index_.push_back(-1);
  if (kind == SymbolKind::kCharacter || id == kEos) {
    output_index_[id] = static_cast<int>(output_symbols_.size());
    output_symbols_.push_back(id);
  }
  return id;
}

SymbolId Alphabet::add_tag(std::string_view symbol) { return add(symbol, SymbolKind::kTag); }

SymbolId Alphabet::add_character(std::string_view symbol) { return add(symbol, SymbolKind::kCharacter); }

std::optional<SymbolId> Alphabet::find(std::string_view symbol) const {
  const auto it = index_.find(std::string(symbol));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

SymbolId Alphabet::id(std::string_view symbol) const {
  if (const auto found = find(symbol)) return *found;
  throw EncodingError(std::string(symbol), "unknown symbol '" + std::string(symbol) + "'");
}

const std::string& Alphabet::symbol(SymbolId id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= symbols_.size()) {
    throw EncodingError(std::to_string(id), "symbol id " + std::to_string(id) + " out of range");
  }
  return symbols_[id];
}

SymbolKind Alphabet::kind(SymbolId id) const {
  symbol(id);
  return kinds_[id];
}

int Alphabet::output_index(SymbolId id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= output_index_.size()) return -1;
  return output_index_[id];
}

nlohmann::json Alphabet::to_json() const {
  nlohmann::json out = nlohmann::json::array();
  for (std::size_t i = 3; i < symbols_.size(); ++i) {
    out.push_back({{"symbol", symbols_[i]}, {"kind", kinds_[i] == SymbolKind::kTag ? "tag" : "char"}});
  }
  return out;
}

Alphabet Alphabet::from_json(const nlohmann::json& json) {
  Alphabet alphabet;
  for (const auto& entry : json) {
    const auto symbol = entry.at("symbol").get<std::string>();
    if (entry.at("kind").get<std::string>() == "tag") {
      alphabet.add_tag(symbol);
    } else {
      alphabet.add_character(symbol);
    }
  }
  return alphabet;
}

// ---------------------------------------------------------------------------

std::vector<std::string> WugSet::lemmas() const {
  std::vector<std::string> out;
  for (const auto& c : candidates) {
    if (std::find(out.begin(), out.end(), c.lemma) == out.end()) out.push_back(c.lemma);
  }
  return out;
}

std::string WugSet::context_of(std::string_view lemma) const {
  for (const auto& c : candidates) {
    if (c.lemma == lemma) return c.context;
  }
  return {};
}

Dataset parse_dataset(std::istream& in, std::optional<Language> expected, Alphabet* alphabet) {
  std::string line;
  std::size_t line_no = 0;
  Dataset dataset;

  if (!std::getline(in, line)) throw ParseError(1, "empty dataset");
  ++line_no;
  const auto header = parse_header(trim_cr(line), line_no);
  if (const auto it = header.find("lang"); it != header.end()) {
    dataset.language = parse_language(it->second);
    if (expected && *expected != dataset.language) {
      throw ValidationError("dataset language is " + it->second + ", expected " + std::string(to_string(*expected)));
    }
  } else if (expected) {
    dataset.language = *expected;
  } else {
    throw ParseError(line_no, "header does not declare lang=");
  }
  if (const auto it = header.find("columns"); it != header.end()) {
    const auto columns = split(it->second, ',');
    const std::vector<std::string> base = {"lemma", "form", "tags"};
    if (columns.size() < 3 || columns.size() > 4 || !std::equal(base.begin(), base.end(), columns.begin()) ||
        (columns.size() == 4 && columns[3] != "class")) {
      throw ParseError(line_no, "columns must be lemma,form,tags[,class]");
    }
  }

  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view row = trim_cr(line);
    if (row.empty() || row.front() == '#') continue;
    const auto fields = split(row, '\t');
    if (fields.size() != 3 && fields.size() != 4) {
      throw ParseError(line_no, "expected 3 or 4 tab-separated columns, got " + std::to_string(fields.size()));
    }
    InflectionExample example;
    example.lemma = fields[0];
    example.form = fields[1];
    if (example.lemma.empty() || example.form.empty()) {
      throw ValidationError("line " + std::to_string(line_no) + ": empty lemma or form");
    }
    for (auto& tag : split(fields[2], ';')) {
      if (tag.empty()) throw ValidationError("line " + std::to_string(line_no) + ": empty tag");
      example.tags.push_back(std::move(tag));
    }
    const bool row_has_class = fields.size() == 4 && !fields[3].empty();
    if (dataset.language == Language::kEnglish) {
      if (!row_has_class) {
        throw ValidationError("line " + std::to_string(line_no) + ": English rows must carry a class label");
      }
      example.inflection_class = parse_class(fields[3]);
      if (example.inflection_class != InflectionClass::kRegular &&
          example.inflection_class != InflectionClass::kIrregular) {
        throw ValidationError("line " + std::to_string(line_no) + ": English class must be regular or irregular");
      }
    } else {
      const InflectionClass computed = classify_german_suffix(example.lemma, example.form);
      if (row_has_class && parse_class(fields[3]) != computed) {
        throw ValidationError("line " + std::to_string(line_no) + ": class '" + fields[3] + "' disagrees with suffix class " +
                              std::string(class_token(computed)));
      }
      example.inflection_class = computed;
    }
    dataset.examples.push_back(std::move(example));
  }
  if (alphabet) extend_alphabet(*alphabet, dataset);
  return dataset;
}

Dataset read_dataset(const std::filesystem::path& path, std::optional<Language> expected, Alphabet* alphabet) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open dataset " + path.string());
  return parse_dataset(in, expected, alphabet);
}

std::string serialize_dataset(const Dataset& dataset) {
  std::string out = "# lang=" + std::string(to_string(dataset.language)) + " columns=lemma,form,tags,class\n";
  for (const auto& e : dataset.examples) {
    out += e.lemma;
    out += '\t';
    out += e.form;
    out += '\t';
    for (std::size_t i = 0; i < e.tags.size(); ++i) {
      if (i) out += ';';
      out += e.tags[i];
    }
    out += '\t';
    out += class_token(e.inflection_class);
    out += '\n';
  }
  return out;
}

void write_dataset(const std::filesystem::path& path, const Dataset& dataset) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << serialize_dataset(dataset);
}

WugSet parse_wug_file(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  WugSet set;
  if (!std::getline(in, line)) throw ParseError(1, "empty wug file");
  ++line_no;
  const auto header = parse_header(trim_cr(line), line_no);
  const auto lang = header.find("lang");
  const auto scale = header.find("rating_scale");
  if (lang == header.end() || scale == header.end()) {
    throw ParseError(line_no, "wug header must declare lang= and rating_scale=");
  }
  set.language = parse_language(lang->second);
  const auto bounds = split(scale->second, ',');
  if (bounds.size() != 2) throw ParseError(line_no, "rating_scale must be <lo>,<hi>");
  set.rating_min = parse_number(bounds[0], line_no, "rating bound");
  set.rating_max = parse_number(bounds[1], line_no, "rating bound");
  if (!(set.rating_min < set.rating_max)) throw ValidationError("rating_scale lower bound must be below upper bound");

  std::map<std::string, double> mass;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view row = trim_cr(line);
    if (row.empty() || row.front() == '#') continue;
    const auto fields = split(row, '\t');
    if (fields.size() != 5 && fields.size() != 6) {
      throw ParseError(line_no, "expected 5 or 6 tab-separated columns, got " + std::to_string(fields.size()));
    }
    WugCandidate c;
    c.lemma = fields[0];
    c.form = fields[1];
    if (c.lemma.empty() || c.form.empty()) {
      throw ValidationError("line " + std::to_string(line_no) + ": empty lemma or form");
    }
    c.inflection_class = parse_class(fields[2]);
    c.human_rating = parse_number(fields[3], line_no, "rating");
    c.human_prod_prob = parse_number(fields[4], line_no, "production probability");
    if (fields.size() == 6) c.context = fields[5];
    if (c.human_prod_prob < 0.0 || c.human_prod_prob > 1.0) {
      throw ValidationError("line " + std::to_string(line_no) + ": production probability " + fields[4] +
                            " outside [0, 1]");
    }
    if (c.human_rating < set.rating_min || c.human_rating > set.rating_max) {
      throw ValidationError("line " + std::to_string(line_no) + ": rating " + fields[3] + " outside declared scale " +
                            scale->second);
    }
    mass[c.lemma] += c.human_prod_prob;
    if (mass[c.lemma] > 1.0 + 1e-9) {
      throw ValidationError("line " + std::to_string(line_no) + ": production probabilities for '" + c.lemma +
                            "' sum above 1");
    }
    set.candidates.push_back(std::move(c));
  }
  return set;
}

WugSet read_wug_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open wug file " + path.string());
  return parse_wug_file(in);
}

void extend_alphabet(Alphabet& alphabet, const Dataset& dataset) {
  for (const auto& e : dataset.examples) {
    for (const auto& tag : e.tags) alphabet.add_tag(tag);
    for (const auto& s : split_symbols(e.lemma)) alphabet.add_character(s);
    for (const auto& s : split_symbols(e.form)) alphabet.add_character(s);
  }
}

DatasetSplit split_dataset(std::span<const InflectionExample> data, SplitRatios ratios, std::uint64_t seed,
                           bool stratify_irregular) {
  if (data.empty()) throw ConfigError("split_dataset: no examples");
  if (ratios.train < 0 || ratios.dev < 0 || ratios.test < 0 ||
      std::abs(ratios.train + ratios.dev + ratios.test - 1.0) > 1e-9) {
    throw ConfigError("split ratios must be non-negative and sum to 1");
  }

  // Each stratum is shuffled and cut independently; strata are visited in
  // class order so the stream of rng draws is fixed for a given input.
  std::map<int, std::vector<std::size_t>> strata;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const int key = stratify_irregular ? static_cast<int>(data[i].inflection_class) : 0;
    strata[key].push_back(i);
  }

  nd::Rng rng(seed);
  std::vector<std::size_t> train, dev, test;
  for (auto& [key, indices] : strata) {
    for (std::size_t i = indices.size(); i > 1; --i) std::swap(indices[i - 1], indices[rng.below(i)]);
    const std::size_t n = indices.size();
    std::size_t n_dev = static_cast<std::size_t>(std::floor(ratios.dev * static_cast<double>(n) + 0.5));
    std::size_t n_test = static_cast<std::size_t>(std::floor(ratios.test * static_cast<double>(n) + 0.5));
    n_dev = std::min(n_dev, n);
    n_test = std::min(n_test, n - n_dev);
    const std::size_t n_train = n - n_dev - n_test;
    train.insert(train.end(), indices.begin(), indices.begin() + n_train);
    dev.insert(dev.end(), indices.begin() + n_train, indices.begin() + n_train + n_dev);
    test.insert(test.end(), indices.begin() + n_train + n_dev, indices.end());
  }

  auto gather = [&](std::vector<std::size_t>& idx) {
    std::sort(idx.begin(), idx.end());
    std::vector<InflectionExample> out;
    out.reserve(idx.size());
    for (std::size_t i : idx) out.push_back(data[i]);
    return out;
  };
  DatasetSplit split;
  split.train = gather(train);
  split.dev = gather(dev);
  split.test = gather(test);
  split.seed = seed;
  return split;
}

std::string normalize_umlauts(std::string_view text) {
  static const std::array<std::pair<std::string_view, std::string_view>, 7> kMap = {{
      {"\xC3\xA4u", "au"},  // äu
      {"\xC3\xA4", "a"},    // ä
      {"\xC3\xB6", "o"},    // ö
      {"\xC3\xBC", "u"},    // ü
      {"\xC3\x84", "A"},    // Ä
      {"\xC3\x96", "O"},    // Ö
      {"\xC3\x9C", "U"},    // Ü
  }};
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size();) {
    bool replaced = false;
    for (const auto& [from, to] : kMap) {
      if (text.substr(i, from.size()) == from) {
        out += to;
        i += from.size();
        replaced = true;
        break;
      }
    }
    if (!replaced) out += text[i++];
  }
  return out;
}

InflectionClass classify_german_suffix(std::string_view singular, std::string_view plural) {
  const std::string sg = normalize_umlauts(singular);
  const std::string pl = normalize_umlauts(plural);
  if (sg == pl) return InflectionClass::kZero;
  if (pl.size() <= sg.size() || pl.compare(0, sg.size(), sg) != 0) return InflectionClass::kOther;
  const std::string_view suffix = std::string_view(pl).substr(sg.size());
  if (suffix == "s") return InflectionClass::kS;
  if (suffix == "er") return InflectionClass::kEr;
  if (suffix == "en" || suffix == "n") return InflectionClass::kEn;
  if (suffix == "e") return InflectionClass::kE;
  return InflectionClass::kOther;
}

std::vector<SymbolId> encode_source(const Alphabet& alphabet, std::string_view lemma,
                                    std::span<const std::string> tags) {
  std::vector<SymbolId> out;
  for (const auto& tag : tags) {
    const SymbolId id = alphabet.id(tag);
    if (alphabet.kind(id) != SymbolKind::kTag) throw EncodingError(tag, "'" + tag + "' is not a tag symbol");
    out.push_back(id);
  }
  for (const auto& s : split_symbols(lemma)) {
    const auto id = alphabet.find(s);
    if (!id || alphabet.kind(*id) != SymbolKind::kCharacter) {
      throw EncodingError(s, "unknown character '" + s + "' in '" + std::string(lemma) + "'");
    }
    out.push_back(*id);
  }
  return out;
}

std::vector<SymbolId> encode_target(const Alphabet& alphabet, std::string_view form) {
  std::vector<SymbolId> out;
  for (const auto& s : split_symbols(form)) {
    const auto id = alphabet.find(s);
    if (!id || alphabet.kind(*id) != SymbolKind::kCharacter) {
      throw EncodingError(s, "unknown character '" + s + "' in '" + std::string(form) + "'");
    }
    out.push_back(*id);
  }
  return out;
}

std::string decode_symbols(const Alphabet& alphabet, std::span<const SymbolId> ids) {
  std::string out;
  for (SymbolId id : ids) {
    if (id == Alphabet::kEos) break;
    if (alphabet.kind(id) == SymbolKind::kCharacter) out += alphabet.symbol(id);
  }
  return out;
}

std::vector<std::string> wug_tags(Language language) {
  if (language == Language::kEnglish) return {"PST"};
  return {"PL", "NEUT"};
}

}  // namespace wugbench::corpus
