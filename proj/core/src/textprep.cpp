#include "reviewscope/textprep.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "reviewscope/config.hpp"
#include "reviewscope/error.hpp"

namespace reviewscope {

namespace {

constexpr char32_t kApostrophe = U'\'';

const ContractionTable kDefaultContractions = {
    {"ain't", "is not"},      {"aren't", "are not"},    {"can't", "cannot"},
    {"couldn't", "could not"}, {"could've", "could have"}, {"didn't", "did not"},
    {"doesn't", "does not"},  {"don't", "do not"},      {"hadn't", "had not"},
    {"hasn't", "has not"},    {"haven't", "have not"},  {"he'd", "he would"},
    {"he'll", "he will"},     {"he's", "he is"},        {"here's", "here is"},
    {"how's", "how is"},      {"i'd", "i would"},       {"i'll", "i will"},
    {"i'm", "i am"},          {"i've", "i have"},       {"isn't", "is not"},
    {"it'd", "it would"},     {"it'll", "it will"},     {"it's", "it is"},
    {"let's", "let us"},      {"mightn't", "might not"}, {"might've", "might have"},
    {"mustn't", "must not"},  {"must've", "must have"}, {"needn't", "need not"},
    {"she'd", "she would"},   {"she'll", "she will"},   {"she's", "she is"},
    {"shouldn't", "should not"}, {"should've", "should have"}, {"that'd", "that would"},
    {"that's", "that is"},    {"there'd", "there would"}, {"there's", "there is"},
    {"they'd", "they would"}, {"they'll", "they will"}, {"they're", "they are"},
    {"they've", "they have"}, {"wasn't", "was not"},    {"we'd", "we would"},
    {"we'll", "we will"},     {"we're", "we are"},      {"we've", "we have"},
    {"weren't", "were not"},  {"what's", "what is"},    {"what're", "what are"},
    {"where's", "where is"},  {"who's", "who is"},      {"who've", "who have"},
    {"won't", "will not"},    {"wouldn't", "would not"}, {"would've", "would have"},
    {"y'all", "you all"},     {"you'd", "you would"},   {"you'll", "you will"},
    {"you're", "you are"},    {"you've", "you have"},
};

std::u32string decode_utf8(std::string_view s) {
  std::u32string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size();) {
    const auto c = static_cast<unsigned char>(s[i]);
    char32_t cp = 0;
    std::size_t len = 1;
    if (c < 0x80) {
      cp = c;
    } else if ((c & 0xE0) == 0xC0) {
      cp = c & 0x1F;
      len = 2;
    } else if ((c & 0xF0) == 0xE0) {
      cp = c & 0x0F;
      len = 3;
    } else if ((c & 0xF8) == 0xF0) {
      cp = c & 0x07;
      len = 4;
    } else {
      out.push_back(U'�');
      ++i;
      continue;
    }
    if (i + len > s.size()) {
      out.push_back(U'�');
      break;
    }
    bool ok = true;
    for (std::size_t k = 1; k < len; ++k) {
      const auto cc = static_cast<unsigned char>(s[i + k]);
      if ((cc & 0xC0) != 0x80) {
        ok = false;
        break;
      }
      cp = (cp << 6) | (cc & 0x3F);
    }
    if (!ok) {
      out.push_back(U'�');
      ++i;
      continue;
    }
    out.push_back(cp);
    i += len;
  }
  return out;
}

void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

// Latin letters kept by cleaning: ASCII plus Latin-1 Supplement and
// Latin Extended-A/B letters.
bool is_latin_letter(char32_t cp) {
  if ((cp >= U'a' && cp <= U'z') || (cp >= U'A' && cp <= U'Z')) return true;
  return cp >= 0xC0 && cp <= 0x24F && cp != 0xD7 && cp != 0xF7;
}

char32_t to_lower(char32_t cp) {
  if (cp >= U'A' && cp <= U'Z') return cp + 32;
  if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 32;
  if ((cp >= 0x100 && cp <= 0x137) || (cp >= 0x14A && cp <= 0x177)) return (cp % 2 == 0) ? cp + 1 : cp;
  if ((cp >= 0x139 && cp <= 0x148) || (cp >= 0x179 && cp <= 0x17E)) return (cp % 2 == 1) ? cp + 1 : cp;
  return cp;
}

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

bool is_delimiter(char c, std::string_view delimiters) {
  return c != '\0' && delimiters.find(c) != std::string_view::npos;
}

// Word characters are everything but spaces, delimiters and apostrophes
// after the first cleaning pass.
std::string expand_contractions(const std::string& text, const ContractionTable& table,
                                std::string_view delimiters) {
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (is_space(c) || is_delimiter(c, delimiters)) {
      out += c;
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && !is_space(text[j]) && !is_delimiter(text[j], delimiters)) ++j;
    std::string run = text.substr(i, j - i);
    std::size_t b = 0;
    std::size_t e = run.size();
    while (b < e && run[b] == '\'') ++b;
    while (e > b && run[e - 1] == '\'') --e;
    const std::string core = run.substr(b, e - b);
    if (auto it = table.find(core); it != table.end()) run = run.substr(0, b) + it->second + run.substr(e);
    out += run;
    i = j;
  }
  return out;
}

}  // namespace

const ContractionTable& default_contractions() { return kDefaultContractions; }

ContractionTable parse_contractions(std::istream& in) {
  ContractionTable table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty() || trim(line).front() == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) throw ValidationError("expected contraction<TAB>expansion", line_no);
    std::string key = trim(std::string_view(line).substr(0, tab));
    std::string value = trim(std::string_view(line).substr(tab + 1));
    for (char& c : key) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    for (char& c : value) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (key.empty()) throw ValidationError("empty contraction", line_no);
    table[std::move(key)] = std::move(value);
  }
  return table;
}

ContractionTable load_contractions(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open contraction table " + path.string());
  return parse_contractions(in);
}

std::string CleaningConfig::effective_delimiters() const {
  std::string out = delimiters;
  if (comma_split && out.find(',') == std::string::npos) out += ',';
  return out;
}

CleaningConfig CleaningConfig::load(const std::filesystem::path& path) {
  const KeyValueFile file = KeyValueFile::load(path);
  CleaningConfig config;
  for (const auto& [key, value] : file.entries()) {
    if (key == "delimiters") {
      for (char c : value) {
        if (static_cast<unsigned char>(c) >= 0x80 || !std::ispunct(static_cast<unsigned char>(c)) || c == '\'') {
          throw ConfigError("delimiters must be ASCII punctuation other than apostrophe");
        }
      }
      if (value.empty()) throw ConfigError("delimiters must not be empty");
      config.delimiters = value;
    } else if (key == "comma_split") {
      config.comma_split = parse_bool(key, value);
    } else if (key == "contractions") {
      std::filesystem::path p = value;
      if (p.is_relative()) p = file.base_dir() / p;
      config.contractions = load_contractions(p);
    } else {
      throw ConfigError("unknown cleaning key \"" + key + "\"");
    }
  }
  return config;
}

std::string clean_text(std::string_view raw, const CleaningConfig& config) {
  const std::string delimiters = config.effective_delimiters();

  // Lower-case; keep letters, digits, delimiters and apostrophes; everything
  // else becomes a space.
  std::string pass1;
  pass1.reserve(raw.size());
  for (char32_t cp : decode_utf8(raw)) {
    if (cp == 0x2018 || cp == 0x2019 || cp == 0x02BC) cp = kApostrophe;
    if (cp == kApostrophe || (cp >= U'0' && cp <= U'9') ||
        (cp < 0x80 && is_delimiter(static_cast<char>(cp), delimiters))) {
      append_utf8(pass1, cp);
    } else if (is_latin_letter(cp)) {
      append_utf8(pass1, to_lower(cp));
    } else {
      pass1 += ' ';
    }
  }

  const std::string expanded = expand_contractions(pass1, config.contractions, delimiters);

  // Drop leftover apostrophes, collapse delimiter runs, then whitespace runs.
  std::string out;
  out.reserve(expanded.size());
  bool pending_space = false;
  char last = '\0';
  for (char c : expanded) {
    if (c == '\'') continue;
    if (is_space(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (is_delimiter(c, delimiters) && is_delimiter(last, delimiters) && !pending_space) continue;
    if (pending_space) {
      out += ' ';
      pending_space = false;
    }
    out += c;
    last = c;
  }
  return out;
}

Sentence make_sentence(std::string review_id, std::size_t index, std::string text) {
  Sentence s{std::move(review_id), index, std::move(text), {}};
  s.tokens = split_whitespace(s.text);
  return s;
}

std::vector<Sentence> split_sentences(std::string_view cleaned, const CleaningConfig& config,
                                      const std::string& review_id) {
  const std::string delimiters = config.effective_delimiters();
  std::vector<Sentence> out;
  std::string segment;
  auto flush = [&] {
    for (char& c : segment) {
      const auto uc = static_cast<unsigned char>(c);
      if (uc < 0x80 && std::ispunct(uc)) c = ' ';
    }
    std::vector<std::string> tokens = split_whitespace(segment);
    segment.clear();
    if (tokens.empty()) return;
    Sentence s{review_id, out.size(), join(tokens, " "), std::move(tokens)};
    out.push_back(std::move(s));
  };
  for (char c : cleaned) {
    if (is_delimiter(c, delimiters)) {
      flush();
    } else {
      segment += c;
    }
  }
  flush();
  return out;
}

std::string strip_delimiters(std::string_view cleaned, const CleaningConfig& config) {
  const std::string delimiters = config.effective_delimiters();
  std::string s(cleaned);
  for (char& c : s) {
    if (is_delimiter(c, delimiters)) c = ' ';
  }
  return join(split_whitespace(s), " ");
}

void write_sentences(const std::vector<Sentence>& sentences, std::ostream& out) {
  for (const Sentence& s : sentences) out << s.review_id << '\t' << s.index << '\t' << s.text << '\n';
}

std::vector<Sentence> parse_sentences(std::istream& in) {
  std::vector<Sentence> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split(line, '\t');
    if (fields.size() != 3) throw ValidationError("expected review_id<TAB>index<TAB>text", line_no);
    long long index = 0;
    try {
      index = parse_integer("index", fields[1]);
    } catch (const ConfigError&) {
      throw ValidationError("bad sentence index \"" + fields[1] + "\"", line_no);
    }
    if (index < 0) throw ValidationError("negative sentence index", line_no);
    out.push_back(make_sentence(fields[0], static_cast<std::size_t>(index), fields[2]));
  }
  return out;
}

}  // namespace reviewscope
