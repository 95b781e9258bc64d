#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace reviewscope {

using ContractionTable = std::map<std::string, std::string>;

/// Built-in English contraction table (also shipped as data/contractions.tsv).
const ContractionTable& default_contractions();

/// `contraction<TAB>expansion` lines, keys lower-case.
ContractionTable parse_contractions(std::istream& in);
ContractionTable load_contractions(const std::filesystem::path& path);

struct CleaningConfig {
  std::string delimiters = ".!?;:";
  bool comma_split = false;
  ContractionTable contractions = default_contractions();

  /// Delimiters in effect, including ',' when comma_split is on.
  std::string effective_delimiters() const;

  /// `key = value` file with keys `delimiters`, `comma_split`, `contractions`
  /// (path relative to the config file). Unknown keys are a ConfigError.
  static CleaningConfig load(const std::filesystem::path& path);
};

/// Lower-cases, expands contractions, drops apostrophes, replaces every other
/// character outside {letters, digits, space, delimiters} with a space,
/// collapses delimiter runs to their first character and whitespace runs to
/// one space. Idempotent.
std::string clean_text(std::string_view raw, const CleaningConfig& config = {});

struct Sentence {
  std::string review_id;
  std::size_t index = 0;
  std::string text;
  std::vector<std::string> tokens;

  bool operator==(const Sentence&) const = default;
};

/// Builds a sentence whose tokens are the whitespace split of text.
Sentence make_sentence(std::string review_id, std::size_t index, std::string text);

/// Splits cleaned text on the configured delimiters. Segments are stripped of
/// any remaining punctuation and blank segments are dropped; indices are
/// assigned consecutively from zero.
std::vector<Sentence> split_sentences(std::string_view cleaned, const CleaningConfig& config = {},
                                      const std::string& review_id = {});

/// Cleaned text with delimiters turned into spaces and spacing collapsed:
/// the words a split would produce, joined by single spaces.
std::string strip_delimiters(std::string_view cleaned, const CleaningConfig& config = {});

/// `review_id<TAB>index<TAB>text` lines.
void write_sentences(const std::vector<Sentence>& sentences, std::ostream& out);
std::vector<Sentence> parse_sentences(std::istream& in);

}  // namespace reviewscope
