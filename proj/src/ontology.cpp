#include "topex/ontology.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "topex/util.hpp"

namespace topex {

namespace {

bool valid_slug(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s) {
    bool ok = (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '-' || c == '_';
    if (!ok) return false;
  }
  return true;
}

}  // namespace

std::string_view to_string(TopicLevel level) {
  switch (level) {
    case TopicLevel::SUPER: return "super";
    case TopicLevel::SUB: return "sub";
    case TopicLevel::ENTITY: return "entity";
  }
  return "?";
}

std::optional<TopicLevel> topic_level_from_string(std::string_view s) {
  if (s == "super") return TopicLevel::SUPER;
  if (s == "sub") return TopicLevel::SUB;
  if (s == "entity") return TopicLevel::ENTITY;
  return std::nullopt;
}

void TopicOntology::add(TopicNode node) {
  if (node.id.empty()) throw std::runtime_error("ontology: empty topic id");
  if (!valid_slug(node.slug)) {
    throw std::runtime_error("ontology: invalid slug '" + node.slug + "' for topic " + node.id);
  }
  if (nodes_.count(node.id)) throw std::runtime_error("ontology: duplicate id " + node.id);
  if (id_by_slug_.count(node.slug)) {
    throw std::runtime_error("ontology: duplicate slug '" + node.slug + "' (topic " + node.id + ")");
  }
  id_by_slug_.emplace(node.slug, node.id);
  nodes_.emplace(node.id, std::move(node));
}

void TopicOntology::validate() const {
  for (const auto& [id, node] : nodes_) {
    if (node.level == TopicLevel::SUPER) {
      if (!node.parent_id.empty()) {
        throw std::runtime_error("ontology: super topic " + id + " must not have a parent");
      }
      continue;
    }
    if (node.parent_id.empty()) {
      throw std::runtime_error("ontology: topic " + id + " has no parent");
    }
    auto it = nodes_.find(node.parent_id);
    if (it == nodes_.end()) {
      throw std::runtime_error("ontology: topic " + id + " references unknown parent " + node.parent_id);
    }
    TopicLevel expected = node.level == TopicLevel::SUB ? TopicLevel::SUPER : TopicLevel::SUB;
    if (it->second.level != expected) {
      throw std::runtime_error("ontology: level mismatch: " + std::string(to_string(node.level)) +
                               " topic " + id + " has " + std::string(to_string(it->second.level)) +
                               " parent " + node.parent_id);
    }
  }
}

const TopicNode* TopicOntology::find(const std::string& id) const {
  auto it = nodes_.find(id);
  return it == nodes_.end() ? nullptr : &it->second;
}

const TopicNode* TopicOntology::find_by_slug(const std::string& slug) const {
  auto it = id_by_slug_.find(slug);
  return it == id_by_slug_.end() ? nullptr : find(it->second);
}

const TopicNode& TopicOntology::super_of(const std::string& id) const {
  const TopicNode* node = find(id);
  if (!node) throw std::runtime_error("ontology: unknown topic " + id);
  while (node->level != TopicLevel::SUPER) {
    const TopicNode* parent = find(node->parent_id);
    if (!parent) throw std::runtime_error("ontology: unknown parent " + node->parent_id);
    node = parent;
  }
  return *node;
}

size_t TopicOntology::count(TopicLevel level) const {
  size_t n = 0;
  for (const auto& [id, node] : nodes_) {
    if (node.level == level) ++n;
  }
  return n;
}

std::vector<const TopicNode*> TopicOntology::nodes() const {
  std::vector<const TopicNode*> out;
  out.reserve(nodes_.size());
  for (const auto& [id, node] : nodes_) out.push_back(&node);
  return out;
}

TopicOntology load_ontology(const std::string& path) {
  require_file(path, "ontology file");
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  TopicOntology ont;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    auto fields = split(line, '\t');
    if (fields.size() != 5) {
      throw std::runtime_error("ontology: line " + std::to_string(line_no) + ": expected 5 fields, got " +
                               std::to_string(fields.size()));
    }
    auto level = topic_level_from_string(fields[3]);
    if (!level) {
      throw std::runtime_error("ontology: line " + std::to_string(line_no) + ": unknown level '" +
                               fields[3] + "'");
    }
    TopicNode node;
    node.id = fields[0];
    node.slug = fields[1];
    node.display_name = fields[2];
    node.level = *level;
    node.parent_id = fields[4] == "-" ? "" : fields[4];
    try {
      ont.add(std::move(node));
    } catch (const std::exception& e) {
      throw std::runtime_error(std::string(e.what()) + " (line " + std::to_string(line_no) + ")");
    }
  }
  ont.validate();
  return ont;
}

void save_ontology(const TopicOntology& ont, const std::string& path) {
  std::ostringstream out;
  out << "# topics\tsuper=" << ont.count(TopicLevel::SUPER) << "\tsub=" << ont.count(TopicLevel::SUB)
      << "\tentity=" << ont.count(TopicLevel::ENTITY) << "\n";
  for (const TopicNode* node : ont.nodes()) {
    out << node->id << '\t' << node->slug << '\t' << node->display_name << '\t'
        << to_string(node->level) << '\t' << (node->parent_id.empty() ? "-" : node->parent_id) << "\n";
  }
  write_file(path, out.str());
}

void PhraseDictionary::add(const std::string& phrase, const std::string& topic_id, double weight) {
  auto tokens = tokenize(phrase);
  if (tokens.empty()) throw std::runtime_error("dictionary: phrase '" + phrase + "' has no tokens");
  if (!(weight > 0.0)) throw std::runtime_error("dictionary: non-positive weight for '" + phrase + "'");
  std::string key = key_of(tokens, 0, tokens.size());
  auto [it, inserted] = entries_.try_emplace(key);
  if (inserted) it->second.tokens = tokens;
  for (auto& [tid, w] : it->second.topics) {
    if (tid == topic_id) {
      w += weight;
      return;
    }
  }
  it->second.topics.emplace_back(topic_id, weight);
  max_tokens_ = std::max(max_tokens_, tokens.size());
}

void PhraseDictionary::validate(const TopicOntology& ont) const {
  for (const auto& [key, entry] : entries_) {
    for (const auto& [topic_id, weight] : entry.topics) {
      if (!ont.find(topic_id)) {
        throw std::runtime_error("dictionary: phrase '" + key + "' references unknown topic " + topic_id);
      }
    }
  }
}

const PhraseEntry* PhraseDictionary::find(const std::string& key) const {
  auto it = entries_.find(key);
  return it == entries_.end() ? nullptr : &it->second;
}

std::string PhraseDictionary::key_of(const std::vector<std::string>& tokens, size_t begin, size_t count) {
  std::string key;
  for (size_t i = 0; i < count; ++i) {
    if (i) key.push_back(' ');
    key += tokens[begin + i];
  }
  return key;
}

PhraseDictionary load_dictionary(const std::string& path) {
  require_file(path, "phrase dictionary file");
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  PhraseDictionary dict;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    auto fields = split(line, '\t');
    if (fields.size() != 3) {
      throw std::runtime_error("dictionary: line " + std::to_string(line_no) + ": expected 3 fields");
    }
    double weight = parse_double(fields[2], "dictionary line " + std::to_string(line_no));
    try {
      dict.add(fields[0], fields[1], weight);
    } catch (const std::exception& e) {
      throw std::runtime_error(std::string(e.what()) + " (line " + std::to_string(line_no) + ")");
    }
  }
  return dict;
}

namespace {

// Unicode whitespace code points recognized by the tokenizer, besides ASCII.
bool is_unicode_space(uint32_t cp) {
  if (cp == 0x00A0 || cp == 0x1680 || cp == 0x2028 || cp == 0x2029 || cp == 0x202F ||
      cp == 0x205F || cp == 0x3000) {
    return true;
  }
  return cp >= 0x2000 && cp <= 0x200A;
}

bool is_ascii_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

bool is_ascii_punct(char c) {
  return (c >= '!' && c <= '/') || (c >= ':' && c <= '@') || (c >= '[' && c <= '`') ||
         (c >= '{' && c <= '~');
}

// Decodes one UTF-8 code point; advances i. Invalid bytes pass through as-is.
uint32_t next_codepoint(std::string_view s, size_t& i, size_t& len) {
  unsigned char c = static_cast<unsigned char>(s[i]);
  len = 1;
  if (c < 0x80) return c;
  uint32_t cp = 0;
  size_t extra = 0;
  if ((c & 0xE0) == 0xC0) {
    cp = c & 0x1F;
    extra = 1;
  } else if ((c & 0xF0) == 0xE0) {
    cp = c & 0x0F;
    extra = 2;
  } else if ((c & 0xF8) == 0xF0) {
    cp = c & 0x07;
    extra = 3;
  } else {
    return c;
  }
  for (size_t k = 1; k <= extra; ++k) {
    if (i + k >= s.size()) return c;
    unsigned char cc = static_cast<unsigned char>(s[i + k]);
    if ((cc & 0xC0) != 0x80) return c;
    cp = (cp << 6) | (cc & 0x3F);
  }
  len = 1 + extra;
  return cp;
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  size_t i = 0;
  while (i < text.size()) {
    size_t len = 1;
    char c = text[i];
    bool space;
    if (static_cast<unsigned char>(c) < 0x80) {
      space = is_ascii_space(c);
    } else {
      uint32_t cp = next_codepoint(text, i, len);
      space = is_unicode_space(cp);
    }
    if (space) {
      if (!current.empty()) {
        tokens.push_back(std::move(current));
        current.clear();
      }
    } else {
      current.append(text.substr(i, len));
    }
    i += len;
  }
  if (!current.empty()) tokens.push_back(std::move(current));

  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (auto& tok : tokens) {
    size_t b = 0;
    size_t e = tok.size();
    while (b < e && is_ascii_punct(tok[b])) ++b;
    while (e > b && is_ascii_punct(tok[e - 1])) --e;
    if (b == e) continue;
    out.push_back(to_lower_ascii(std::string_view(tok).substr(b, e - b)));
  }
  return out;
}

std::string split_camel_case(std::string_view token) {
  std::string out;
  for (size_t i = 0; i < token.size(); ++i) {
    char c = token[i];
    bool upper = c >= 'A' && c <= 'Z';
    bool prev_lower = i > 0 && ((token[i - 1] >= 'a' && token[i - 1] <= 'z') ||
                                (token[i - 1] >= '0' && token[i - 1] <= '9'));
    if (upper && prev_lower) out.push_back(' ');
    out.push_back(upper ? static_cast<char>(c - 'A' + 'a') : c);
  }
  return out;
}

BagOfTopics topicize(std::string_view text, const PhraseDictionary& dict) {
  BagOfTopics bag;
  if (dict.size() == 0) return bag;
  auto tokens = tokenize(text);
  size_t max_len = dict.max_phrase_tokens();
  size_t i = 0;
  while (i < tokens.size()) {
    size_t longest = std::min(max_len, tokens.size() - i);
    bool matched = false;
    for (size_t len = longest; len >= 1; --len) {
      const PhraseEntry* entry = dict.find(PhraseDictionary::key_of(tokens, i, len));
      if (entry) {
        for (const auto& [topic_id, weight] : entry->topics) bag[topic_id] += weight;
        i += len;
        matched = true;
        break;
      }
    }
    if (!matched) ++i;
  }
  return bag;
}

}  // namespace topex
