#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace reviewscope {

class Tokenizer {
 public:
  virtual ~Tokenizer() = default;
  virtual std::vector<std::string> tokenize(std::string_view text) const = 0;
};

/// Splits on whitespace and emits every ASCII punctuation character as its
/// own token. Bytes >= 0x80 are treated as word characters.
class WordTokenizer final : public Tokenizer {
 public:
  std::vector<std::string> tokenize(std::string_view text) const override;
};

/// Greedy longest-match-first subword tokenizer over a fixed vocabulary.
/// Continuation pieces carry the "##" prefix; words that cannot be covered
/// become a single unknown token. Input is lower-cased and pre-split with
/// WordTokenizer first.
class WordpieceTokenizer final : public Tokenizer {
 public:
  explicit WordpieceTokenizer(std::unordered_set<std::string> vocabulary,
                              std::string unknown_token = "[UNK]",
                              std::size_t max_word_chars = 100);

  /// One token per line; blank lines are skipped.
  static WordpieceTokenizer load(const std::filesystem::path& vocab_path);

  std::vector<std::string> tokenize(std::string_view text) const override;

 private:
  std::unordered_set<std::string> vocabulary_;
  std::string unknown_token_;
  std::size_t max_word_chars_;
};

}  // namespace reviewscope
