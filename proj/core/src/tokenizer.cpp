#include "reviewscope/tokenizer.hpp"

#include <cctype>
#include <fstream>

#include "reviewscope/config.hpp"
#include "reviewscope/error.hpp"

namespace reviewscope {

namespace {

bool is_ascii_punct(unsigned char c) { return c < 0x80 && std::ispunct(c) != 0; }
bool is_ascii_space(unsigned char c) { return c < 0x80 && std::isspace(c) != 0; }

// Number of UTF-8 code points; continuation bytes are not counted.
std::size_t utf8_length(std::string_view s) {
  std::size_t n = 0;
  for (unsigned char c : s) {
    if ((c & 0xC0) != 0x80) ++n;
  }
  return n;
}

// Byte length of the UTF-8 sequence starting with lead byte c.
std::size_t utf8_sequence_length(unsigned char c) {
  if (c < 0x80) return 1;
  if ((c & 0xE0) == 0xC0) return 2;
  if ((c & 0xF0) == 0xE0) return 3;
  if ((c & 0xF8) == 0xF0) return 4;
  return 1;
}

}  // namespace

std::vector<std::string> WordTokenizer::tokenize(std::string_view text) const {
  std::vector<std::string> tokens;
  std::string current;
  for (unsigned char c : text) {
    if (is_ascii_space(c)) {
      if (!current.empty()) tokens.push_back(std::move(current));
      current.clear();
    } else if (is_ascii_punct(c)) {
      if (!current.empty()) tokens.push_back(std::move(current));
      current.clear();
      tokens.emplace_back(1, static_cast<char>(c));
    } else {
      current += static_cast<char>(c);
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

WordpieceTokenizer::WordpieceTokenizer(std::unordered_set<std::string> vocabulary,
                                       std::string unknown_token, std::size_t max_word_chars)
    : vocabulary_(std::move(vocabulary)),
      unknown_token_(std::move(unknown_token)),
      max_word_chars_(max_word_chars) {}

WordpieceTokenizer WordpieceTokenizer::load(const std::filesystem::path& vocab_path) {
  std::ifstream in(vocab_path);
  if (!in) throw LoadError("cannot open vocabulary " + vocab_path.string());
  std::unordered_set<std::string> vocab;
  std::string line;
  while (std::getline(in, line)) {
    std::string token = trim(line);
    if (!token.empty()) vocab.insert(std::move(token));
  }
  if (vocab.empty()) throw LoadError("empty vocabulary " + vocab_path.string());
  return WordpieceTokenizer(std::move(vocab));
}

std::vector<std::string> WordpieceTokenizer::tokenize(std::string_view text) const {
  std::string lowered(text);
  for (char& c : lowered) {
    if (static_cast<unsigned char>(c) < 0x80) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  std::vector<std::string> out;
  for (const std::string& word : WordTokenizer{}.tokenize(lowered)) {
    if (utf8_length(word) > max_word_chars_) {
      out.push_back(unknown_token_);
      continue;
    }
    std::vector<std::string> pieces;
    std::size_t start = 0;
    bool bad = false;
    while (start < word.size()) {
      std::size_t end = word.size();
      std::string match;
      while (end > start) {
        std::string piece = word.substr(start, end - start);
        if (start > 0) piece = "##" + piece;
        if (vocabulary_.contains(piece)) {
          match = std::move(piece);
          break;
        }
        // Step back one whole code point.
        std::size_t prev = start;
        while (prev < end) {
          const std::size_t len = utf8_sequence_length(static_cast<unsigned char>(word[prev]));
          if (prev + len >= end) break;
          prev += len;
        }
        end = prev;
      }
      if (match.empty()) {
        bad = true;
        break;
      }
      pieces.push_back(std::move(match));
      start = end;
    }
    if (bad) {
      out.push_back(unknown_token_);
    } else {
      for (auto& p : pieces) out.push_back(std::move(p));
    }
  }
  return out;
}

}  // namespace reviewscope
