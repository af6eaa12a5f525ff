// wugbench: train seq2seq inflection models and score them on wug tests.
//
//   wugbench split  --config en.json
//   wugbench train  --config en.json --arch transformer --seeds 3 --epochs 5
//   wugbench wug    --config de.json --arch transformer --seeds 10
//   wugbench report --config en.json --config de.json --out results

#include <charconv>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wugbench/error.hpp"
#include "wugbench/runner.hpp"

namespace {

using namespace wugbench;
namespace fs = std::filesystem;

std::string quote(std::string_view text) {
  std::string out = "\"";
  for (char c : text) {
    if (c == '"' || c == '\\') out += '\\';
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out += c;
  }
  return out + '"';
}

int fail(std::string_view kind, std::string_view message, int code) {
  std::cerr << "error kind=" << kind << " message=" << quote(message) << '\n';
  return code;
}

std::vector<std::string> split_list(const std::vector<std::string>& items) {
  std::vector<std::string> out;
  for (const std::string& item : items) {
    std::size_t start = 0;
    while (start <= item.size()) {
      const std::size_t comma = std::min(item.find(',', start), item.size());
      if (comma > start) out.push_back(item.substr(start, comma - start));
      start = comma + 1;
    }
  }
  return out;
}

std::uint64_t parse_count(const std::string& text, const char* what) {
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ConfigError(std::string(what) + " expects a non-negative integer, got '" + text + "'");
  }
  return value;
}

// "10" means seeds 1..10; "2,5,7" lists them.
std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  const auto parts = split_list({text});
  if (parts.empty()) throw ConfigError("--seeds is empty");
  std::vector<std::uint64_t> seeds;
  if (parts.size() == 1 && text.find(',') == std::string::npos) {
    const std::uint64_t n = parse_count(parts.front(), "--seeds");
    if (n == 0) throw ConfigError("--seeds must be at least 1");
    for (std::uint64_t k = 1; k <= n; ++k) seeds.push_back(k);
    return seeds;
  }
  for (const std::string& p : parts) seeds.push_back(parse_count(p, "--seeds"));
  return seeds;
}

struct Overrides {
  std::vector<std::string> configs;
  std::vector<std::string> archs;
  std::string seeds;
  std::optional<std::size_t> epochs;
  std::optional<std::size_t> beam_width;
  std::string out;
};

runner::ExperimentConfig load(const std::string& path, const Overrides& o, const std::string& out) {
  runner::ExperimentConfig c = runner::ExperimentConfig::load(path);
  if (!o.archs.empty()) {
    c.architectures.clear();
    for (const std::string& a : split_list(o.archs)) c.architectures.push_back(seq2seq::parse_architecture(a));
  }
  if (!o.seeds.empty()) c.seeds = parse_seeds(o.seeds);
  if (o.epochs) c.training.epochs = *o.epochs;
  if (o.beam_width) c.beam_width = *o.beam_width;
  if (!out.empty()) c.output = out;
  c.validate();
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wug-test laboratory for character-level inflection models"};
  app.require_subcommand(1);
  app.fallthrough();

  Overrides o;
  app.add_option("--config", o.configs, "Experiment config JSON (repeat for report)")->take_all();
  app.add_option("--arch", o.archs, "Architectures, e.g. transformer,bilstm_attn");
  app.add_option("--seeds", o.seeds, "Seed count N (1..N) or a comma list");
  app.add_option("--epochs", o.epochs, "Maximum training epochs");
  app.add_option("--beam-width", o.beam_width, "Beam width for test decoding and wug productions");
  app.add_option("--out", o.out, "Output directory");

  auto* split = app.add_subcommand("split", "Write train/dev/test TSVs");
  auto* train = app.add_subcommand("train", "Train models and write training curves");
  auto* eval = app.add_subcommand("eval", "Test accuracy and F1");
  auto* wug = app.add_subcommand("wug", "Wug ratings, productions and correlations");
  auto* report = app.add_subcommand("report", "Full pipeline and summary.json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << app.help();
    return fail("usage", e.what(), 2);
  }

  try {
    if (o.configs.empty()) return fail("config", "missing --config", 2);
    if (o.configs.size() > 1 && !report->parsed()) {
      return fail("usage", "several --config values are only accepted by report", 2);
    }
    if (report->parsed() && o.configs.size() > 1) {
      std::vector<runner::ExperimentConfig> configs;
      for (const std::string& path : o.configs) {
        const std::string out =
            o.out.empty() ? std::string() : (fs::path(o.out) / fs::path(path).stem()).string();
        configs.push_back(load(path, o, out));
      }
      const fs::path combined =
          o.out.empty() ? configs.front().output.parent_path() / "combined" : fs::path(o.out) / "combined";
      runner::run_report(configs, combined);
      std::cout << "wrote " << combined.string() << '\n';
      return 0;
    }

    const runner::ExperimentConfig config = load(o.configs.front(), o, o.out);
    if (split->parsed()) {
      runner::run_split(config);
      std::cout << "wrote " << (config.output / "data").string() << '\n';
    } else if (train->parsed()) {
      runner::run_train(config);
    } else if (eval->parsed()) {
      runner::run_eval(config);
    } else if (wug->parsed()) {
      runner::run_wug(config);
    } else {
      runner::run_experiment(config);
    }
    if (!split->parsed()) std::cout << "wrote " << config.report_dir().string() << '\n';
    return 0;
  } catch (const ConfigError& e) {
    return fail(to_string(e.kind()), e.what(), 2);
  } catch (const Error& e) {
    return fail(to_string(e.kind()), e.what(), 1);
  } catch (const std::exception& e) {
    return fail("internal", e.what(), 1);
  }
}
