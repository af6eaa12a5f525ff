#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "wugbench/corpus.hpp"
#include "wugbench/nd/array.hpp"
#include "wugbench/nd/checkpoint.hpp"
#include "wugbench/nd/graph.hpp"

namespace wugbench::seq2seq {

using corpus::SymbolId;

enum class Architecture { kBiLstmAttn, kBiLstmNoAttn, kUniLstmAttn, kUniLstmNoAttn, kTransformer };

inline constexpr Architecture kAllArchitectures[] = {Architecture::kBiLstmAttn, Architecture::kBiLstmNoAttn,
                                                     Architecture::kUniLstmAttn, Architecture::kUniLstmNoAttn,
                                                     Architecture::kTransformer};

// Stable identifier used in file names and reports ("bilstm_attn", ...).
std::string_view to_string(Architecture arch);
// Display name ("BiLSTMAttn", ...).
std::string_view display_name(Architecture arch);
// Case-insensitive; '_' and '-' are ignored, so "BiLSTMAttn" and
// "bilstm-attn" both parse.
Architecture parse_architecture(std::string_view text);

bool is_lstm(Architecture arch);
bool is_bidirectional(Architecture arch);
bool has_attention(Architecture arch);

struct ModelConfig {
  Architecture arch = Architecture::kBiLstmAttn;

  // LSTM family
  std::size_t embedding_dim = 300;
  std::size_t hidden_dim = 100;
  std::size_t lstm_layers = 2;
  std::size_t attention_dim = 100;
  double init_range = 0.08;

  // Transformer
  std::size_t model_dim = 256;
  std::size_t ffn_dim = 1024;
  std::size_t num_layers = 4;
  std::size_t num_heads = 4;

  double dropout = 0.3;
  std::size_t max_source_len = 64;
  // Decoding stops after |source| + max_decode_extra steps.
  std::size_t max_decode_extra = 10;
  std::uint64_t seed = 1;

  void validate() const;
  nlohmann::json to_json() const;
  static ModelConfig from_json(const nlohmann::json& json);
  // Applies keys present in `overrides` on top of this config.
  ModelConfig with_overrides(const nlohmann::json& overrides) const;
};

// Encoder results shared by every hypothesis decoded from one source.
struct EncoderMemory {
  nd::Array outputs;               // one row per source position
  std::vector<nd::Array> cached;   // architecture-specific projections
};

struct DecoderState {
  std::shared_ptr<const EncoderMemory> memory;
  std::vector<nd::Array> tensors;  // recurrent state or self-attention cache
  std::vector<SymbolId> prefix;    // symbols consumed so far, starting after BOS
};

struct StepOutput {
  std::vector<double> log_probs;   // indexed like alphabet().output_symbols()
  DecoderState state;
};

// What decoding and wug scoring need from a model: start from a source and
// advance one symbol at a time.
class StepModel {
 public:
  virtual ~StepModel() = default;

  virtual const corpus::Alphabet& alphabet() const = 0;
  virtual DecoderState start(std::span<const SymbolId> source) const = 0;
  // `prev` is BOS or a character. Throws EncodingError for anything else.
  virtual StepOutput step(const DecoderState& state, SymbolId prev) const = 0;
  virtual std::size_t max_decode_len(std::size_t source_len) const { return source_len + 10; }
};

struct AttentionResult {
  std::vector<double> context;
  std::vector<double> weights;
};

class Model : public StepModel {
 public:
  ~Model() override = default;

  const ModelConfig& config() const noexcept { return config_; }
  const corpus::Alphabet& alphabet() const override { return alphabet_; }
  std::string identity() const;  // "<arch>-seed<k>"

  std::vector<nd::Parameter*> parameters();
  std::vector<const nd::Parameter*> parameters() const;
  std::size_t parameter_count() const;
  nd::Parameter* find_parameter(std::string_view name);

  std::size_t trained_epochs() const noexcept { return trained_epochs_; }
  void set_trained_epochs(std::size_t epochs) { trained_epochs_ = epochs; }

  // Sum over the k+1 teacher-forced steps (k characters, then EOS) of
  // -log p(gold | prefix, source). Dropout is active when `g` is training.
  virtual nd::Var loss(nd::Graph& g, std::span<const SymbolId> source, std::span<const SymbolId> target) = 0;

  // Encoder rows plus the decoder's initial state. Throws LengthError for
  // sources longer than config().max_source_len and ContractError for empty ones.
  DecoderState start(std::span<const SymbolId> source) const override;
  std::size_t max_decode_len(std::size_t source_len) const override {
    return source_len + config_.max_decode_extra;
  }

  nd::Checkpoint to_checkpoint() const;
  void load_parameters(const nd::Checkpoint& checkpoint);
  // Copies values of every parameter from `other` (same config and alphabet).
  void copy_parameters_from(const Model& other);

 protected:
  Model(ModelConfig config, corpus::Alphabet alphabet);

  nd::Parameter& add_parameter(std::string name, nd::Array value);
  nd::Array uniform(nd::Shape shape, double range);
  nd::Array gaussian(nd::Shape shape, double stddev);
  void check_source(std::span<const SymbolId> source) const;
  void check_prev(SymbolId prev) const;

  virtual std::shared_ptr<EncoderMemory> encode_memory(std::span<const SymbolId> source) const = 0;
  virtual std::vector<nd::Array> initial_tensors(const EncoderMemory& memory) const = 0;

  ModelConfig config_;
  corpus::Alphabet alphabet_;
  std::size_t output_size_;
  // deque-like stability: parameters are only added during construction.
  std::vector<std::unique_ptr<nd::Parameter>> params_;
  std::size_t trained_epochs_ = 0;

 private:
  nd::Rng init_rng_;
};

// build_model: seeded construction of any of the five architectures.
std::unique_ptr<Model> build_model(const ModelConfig& config, const corpus::Alphabet& alphabet);
// Rebuilds a model from a checkpoint written by Model::to_checkpoint().
std::unique_ptr<Model> model_from_checkpoint(const nd::Checkpoint& checkpoint);

// Probabilities from a StepOutput (exp of log_probs).
std::vector<double> probabilities(const StepOutput& out);

}  // namespace wugbench::seq2seq
