#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

namespace reviewscope {

/// Classification vocabulary drawn from a topic model.
struct TopicDictionary {
  std::vector<std::string> words;  // sorted, unique, lower-case
  std::size_t topic_count = 0;
  std::string source;

  std::size_t vocabulary_size() const { return words.size(); }
  bool contains(const std::string& word) const;
};

/// Sorts, lower-cases and de-duplicates; empty words are dropped.
TopicDictionary make_dictionary(std::vector<std::string> words, std::size_t topic_count,
                                std::string source);

/// One word per line, sorted. This is also the interchange format for
/// dictionaries exported by external topic models.
void write_dictionary(const TopicDictionary& dictionary, std::ostream& out);
TopicDictionary parse_dictionary(std::istream& in, std::size_t topic_count = 0,
                                 std::string source = {});
TopicDictionary load_dictionary(const std::filesystem::path& path, std::size_t topic_count = 0,
                                std::string source = {});

}  // namespace reviewscope
