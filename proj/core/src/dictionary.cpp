#include "reviewscope/dictionary.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>

#include "reviewscope/config.hpp"
#include "reviewscope/error.hpp"

namespace reviewscope {

bool TopicDictionary::contains(const std::string& word) const {
  return std::binary_search(words.begin(), words.end(), word);
}

TopicDictionary make_dictionary(std::vector<std::string> words, std::size_t topic_count, std::string source) {
  std::vector<std::string> cleaned;
  cleaned.reserve(words.size());
  for (auto& w : words) {
    std::string t = trim(w);
    for (char& c : t) {
      if (static_cast<unsigned char>(c) < 0x80) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    if (!t.empty()) cleaned.push_back(std::move(t));
  }
  std::sort(cleaned.begin(), cleaned.end());
  cleaned.erase(std::unique(cleaned.begin(), cleaned.end()), cleaned.end());
  return TopicDictionary{std::move(cleaned), topic_count, std::move(source)};
}

void write_dictionary(const TopicDictionary& dictionary, std::ostream& out) {
  for (const auto& w : dictionary.words) out << w << '\n';
}

TopicDictionary parse_dictionary(std::istream& in, std::size_t topic_count, std::string source) {
  std::vector<std::string> words;
  std::string line;
  while (std::getline(in, line)) words.push_back(line);
  return make_dictionary(std::move(words), topic_count, std::move(source));
}

TopicDictionary load_dictionary(const std::filesystem::path& path, std::size_t topic_count, std::string source) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot open dictionary " + path.string());
  return parse_dictionary(in, topic_count, source.empty() ? path.stem().string() : std::move(source));
}

}  // namespace reviewscope
