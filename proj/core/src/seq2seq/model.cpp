#include "wugbench/seq2seq/model.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "wugbench/error.hpp"
#include "wugbench/seq2seq/lstm.hpp"
#include "wugbench/seq2seq/transformer.hpp"

namespace wugbench::seq2seq {

std::string_view to_string(Architecture arch) {
  switch (arch) {
    case Architecture::kBiLstmAttn: return "bilstm_attn";
    case Architecture::kBiLstmNoAttn: return "bilstm_noattn";
    case Architecture::kUniLstmAttn: return "unilstm_attn";
    case Architecture::kUniLstmNoAttn: return "unilstm_noattn";
    case Architecture::kTransformer: return "transformer";
  }
  return "unknown";
}

std::string_view display_name(Architecture arch) {
  switch (arch) {
    case Architecture::kBiLstmAttn: return "BiLSTMAttn";
    case Architecture::kBiLstmNoAttn: return "BiLSTMNoAttn";
    case Architecture::kUniLstmAttn: return "UniLSTMAttn";
    case Architecture::kUniLstmNoAttn: return "UniLSTMNoAttn";
    case Architecture::kTransformer: return "Transformer";
  }
  return "unknown";
}

Architecture parse_architecture(std::string_view text) {
  auto squash = [](std::string_view s) {
    std::string out;
    for (char c : s) {
      if (c == '_' || c == '-') continue;
      out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    return out;
  };
  const std::string key = squash(text);
  for (Architecture arch : kAllArchitectures) {
    if (squash(to_string(arch)) == key) return arch;
  }
  // Short forms: BA, BN, UA, UN, Trm.
  if (key == "ba") return Architecture::kBiLstmAttn;
  if (key == "bn") return Architecture::kBiLstmNoAttn;
  if (key == "ua") return Architecture::kUniLstmAttn;
  if (key == "un") return Architecture::kUniLstmNoAttn;
  if (key == "trm") return Architecture::kTransformer;
  throw ConfigError("unknown architecture '" + std::string(text) + "'");
}

bool is_lstm(Architecture arch) { return arch != Architecture::kTransformer; }

bool is_bidirectional(Architecture arch) {
  return arch == Architecture::kBiLstmAttn || arch == Architecture::kBiLstmNoAttn;
}

bool has_attention(Architecture arch) {
  return arch == Architecture::kBiLstmAttn || arch == Architecture::kUniLstmAttn || arch == Architecture::kTransformer;
}

// ---------------------------------------------------------------------------

void ModelConfig::validate() const {
  auto positive = [](std::size_t v, const char* name) {
    if (v == 0) throw ConfigError(std::string(name) + " must be positive");
  };
  positive(max_source_len, "max_source_len");
  if (dropout < 0.0 || dropout >= 1.0) throw ConfigError("dropout must be in [0, 1)");
  if (is_lstm(arch)) {
    positive(embedding_dim, "embedding_dim");
    positive(hidden_dim, "hidden_dim");
    positive(lstm_layers, "lstm_layers");
    if (has_attention(arch)) positive(attention_dim, "attention_dim");
    if (!(init_range > 0.0)) throw ConfigError("init_range must be positive");
  } else {
    positive(model_dim, "model_dim");
    positive(ffn_dim, "ffn_dim");
    positive(num_layers, "num_layers");
    positive(num_heads, "num_heads");
    if (model_dim % num_heads != 0) throw ConfigError("num_heads must divide model_dim");
  }
}

nlohmann::json ModelConfig::to_json() const {
  return {
      {"arch", to_string(arch)},
      {"embedding_dim", embedding_dim},
      {"hidden_dim", hidden_dim},
      {"lstm_layers", lstm_layers},
      {"attention_dim", attention_dim},
      {"init_range", init_range},
      {"model_dim", model_dim},
      {"ffn_dim", ffn_dim},
      {"num_layers", num_layers},
      {"num_heads", num_heads},
      {"dropout", dropout},
      {"max_source_len", max_source_len},
      {"max_decode_extra", max_decode_extra},
      {"seed", seed},
  };
}

ModelConfig ModelConfig::from_json(const nlohmann::json& json) { return ModelConfig{}.with_overrides(json); }

ModelConfig ModelConfig::with_overrides(const nlohmann::json& overrides) const {
  ModelConfig c = *this;
  if (!overrides.is_object()) throw ConfigError("model overrides must be a JSON object");
  try {
    for (const auto& [key, value] : overrides.items()) {
      if (key == "arch") c.arch = parse_architecture(value.get<std::string>());
      else if (key == "embedding_dim") c.embedding_dim = value.get<std::size_t>();
      else if (key == "hidden_dim") c.hidden_dim = value.get<std::size_t>();
      else if (key == "lstm_layers") c.lstm_layers = value.get<std::size_t>();
      else if (key == "attention_dim") c.attention_dim = value.get<std::size_t>();
      else if (key == "init_range") c.init_range = value.get<double>();
      else if (key == "model_dim") c.model_dim = value.get<std::size_t>();
      else if (key == "ffn_dim") c.ffn_dim = value.get<std::size_t>();
      else if (key == "num_layers") c.num_layers = value.get<std::size_t>();
      else if (key == "num_heads") c.num_heads = value.get<std::size_t>();
      else if (key == "dropout") c.dropout = value.get<double>();
      else if (key == "max_source_len") c.max_source_len = value.get<std::size_t>();
      else if (key == "max_decode_extra") c.max_decode_extra = value.get<std::size_t>();
      else if (key == "seed") c.seed = value.get<std::uint64_t>();
      else throw ConfigError("unknown model option '" + key + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad model option: ") + e.what());
  }
  return c;
}

// ---------------------------------------------------------------------------

Model::Model(ModelConfig config, corpus::Alphabet alphabet)
    : config_(std::move(config)),
      alphabet_(std::move(alphabet)),
      output_size_(alphabet_.output_symbols().size()),
      init_rng_(config_.seed) {
  config_.validate();
  if (output_size_ < 2) throw ConfigError("alphabet has no characters");
}

std::string Model::identity() const {
  return std::string(to_string(config_.arch)) + "-seed" + std::to_string(config_.seed);
}

std::vector<nd::Parameter*> Model::parameters() {
  std::vector<nd::Parameter*> out;
  for (auto& p : params_) out.push_back(p.get());
  return out;
}

std::vector<const nd::Parameter*> Model::parameters() const {
  std::vector<const nd::Parameter*> out;
  for (const auto& p : params_) out.push_back(p.get());
  return out;
}

std::size_t Model::parameter_count() const {
  std::size_t n = 0;
  for (const auto& p : params_) n += p->value().size();
  return n;
}

nd::Parameter* Model::find_parameter(std::string_view name) {
  for (auto& p : params_) {
    if (p->name() == name) return p.get();
  }
  return nullptr;
}

nd::Parameter& Model::add_parameter(std::string name, nd::Array value) {
  params_.push_back(std::make_unique<nd::Parameter>(std::move(name), std::move(value)));
  return *params_.back();
}

nd::Array Model::uniform(nd::Shape shape, double range) {
  nd::Array out(std::move(shape));
  for (double& v : out.values()) v = init_rng_.uniform(-range, range);
  return out;
}

nd::Array Model::gaussian(nd::Shape shape, double stddev) {
  nd::Array out(std::move(shape));
  for (double& v : out.values()) v = init_rng_.normal(0.0, stddev);
  return out;
}

void Model::check_source(std::span<const SymbolId> source) const {
  if (source.empty()) throw ContractError("empty source sequence");
  if (source.size() > config_.max_source_len) {
    throw LengthError("source length " + std::to_string(source.size()) + " exceeds maximum " +
                      std::to_string(config_.max_source_len));
  }
  for (SymbolId id : source) {
    if (id < 0 || static_cast<std::size_t>(id) >= alphabet_.size()) {
      throw EncodingError(std::to_string(id), "source symbol id " + std::to_string(id) + " not in alphabet");
    }
  }
}

void Model::check_prev(SymbolId prev) const {
  if (prev == corpus::Alphabet::kBos) return;
  if (prev < 0 || static_cast<std::size_t>(prev) >= alphabet_.size() ||
      alphabet_.kind(prev) != corpus::SymbolKind::kCharacter) {
    throw EncodingError(std::to_string(prev), "previous symbol id " + std::to_string(prev) + " is not BOS or a character");
  }
}

DecoderState Model::start(std::span<const SymbolId> source) const {
  check_source(source);
  DecoderState state;
  auto memory = encode_memory(source);
  state.tensors = initial_tensors(*memory);
  state.memory = std::move(memory);
  return state;
}

nd::Checkpoint Model::to_checkpoint() const {
  nd::Checkpoint ckpt;
  ckpt.config = {{"model", config_.to_json()}, {"alphabet", alphabet_.to_json()}, {"trained_epochs", trained_epochs_}};
  ckpt.config_hash = nd::config_hash(ckpt.config["model"]);
  for (const auto& p : params_) ckpt.tensors.emplace_back(p->name(), p->value());
  return ckpt;
}

void Model::load_parameters(const nd::Checkpoint& checkpoint) {
  for (auto& p : params_) {
    const nd::Array* found = checkpoint.find(p->name());
    if (!found) throw IoError("checkpoint lacks parameter '" + p->name() + "'");
    if (found->shape() != p->value().shape()) {
      throw ShapeError("checkpoint parameter '" + p->name() + "' has shape " + nd::shape_string(found->shape()) +
                       ", model expects " + nd::shape_string(p->value().shape()));
    }
    p->value() = *found;
  }
  if (checkpoint.config.contains("trained_epochs")) {
    trained_epochs_ = checkpoint.config["trained_epochs"].get<std::size_t>();
  }
}

void Model::copy_parameters_from(const Model& other) {
  if (other.params_.size() != params_.size()) throw ContractError("copy_parameters_from: parameter lists differ");
  for (std::size_t i = 0; i < params_.size(); ++i) {
    if (params_[i]->value().shape() != other.params_[i]->value().shape()) {
      throw ShapeError("copy_parameters_from: shape mismatch for " + params_[i]->name());
    }
    params_[i]->value() = other.params_[i]->value();
  }
  trained_epochs_ = other.trained_epochs_;
}

std::unique_ptr<Model> build_model(const ModelConfig& config, const corpus::Alphabet& alphabet) {
  config.validate();
  if (is_lstm(config.arch)) return std::make_unique<LstmModel>(config, alphabet);
  return std::make_unique<TransformerModel>(config, alphabet);
}

std::unique_ptr<Model> model_from_checkpoint(const nd::Checkpoint& checkpoint) {
  if (!checkpoint.config.contains("model") || !checkpoint.config.contains("alphabet")) {
    throw IoError("checkpoint does not describe a model");
  }
  const ModelConfig config = ModelConfig::from_json(checkpoint.config["model"]);
  if (nd::config_hash(checkpoint.config["model"]) != checkpoint.config_hash) {
    throw IoError("checkpoint config hash mismatch");
  }
  auto model = build_model(config, corpus::Alphabet::from_json(checkpoint.config["alphabet"]));
  model->load_parameters(checkpoint);
  return model;
}

std::vector<double> probabilities(const StepOutput& out) {
  std::vector<double> p(out.log_probs.size());
  std::transform(out.log_probs.begin(), out.log_probs.end(), p.begin(), [](double lp) { return std::exp(lp); });
  return p;
}

}  // namespace wugbench::seq2seq
