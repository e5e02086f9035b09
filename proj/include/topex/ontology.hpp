#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace topex {

enum class TopicLevel : uint8_t { SUPER, SUB, ENTITY };

std::string_view to_string(TopicLevel level);
std::optional<TopicLevel> topic_level_from_string(std::string_view s);

struct TopicNode {
  std::string id;
  std::string slug;
  std::string display_name;
  TopicLevel level = TopicLevel::ENTITY;
  std::string parent_id;  // empty for super topics
};

// Three-level topic tree. Immutable once loaded; lookups are safe to share
// across threads.
class TopicOntology {
 public:
  void add(TopicNode node);        // throws on duplicate id/slug
  void validate() const;           // throws on orphan parents, level mismatches, cycles

  const TopicNode* find(const std::string& id) const;
  const TopicNode* find_by_slug(const std::string& slug) const;
  // Walks parents until the super level; throws if the node is unknown.
  const TopicNode& super_of(const std::string& id) const;

  size_t size() const { return nodes_.size(); }
  size_t count(TopicLevel level) const;
  // Nodes in id order.
  std::vector<const TopicNode*> nodes() const;

 private:
  std::map<std::string, TopicNode> nodes_;
  std::unordered_map<std::string, std::string> id_by_slug_;
};

// Record per line: id<TAB>slug<TAB>display_name<TAB>level<TAB>parent_id-or-dash.
// Lines starting with '#' are comments. Errors name the offending line.
TopicOntology load_ontology(const std::string& path);
void save_ontology(const TopicOntology& ont, const std::string& path);

struct PhraseEntry {
  std::vector<std::string> tokens;  // normalized
  std::vector<std::pair<std::string, double>> topics;  // topic id -> weight
};

// Normalized phrase -> topics. One phrase may map to several topics; all of
// them are emitted on a match.
class PhraseDictionary {
 public:
  // Throws if the phrase normalizes to nothing or weight is not positive.
  void add(const std::string& phrase, const std::string& topic_id, double weight = 1.0);
  void validate(const TopicOntology& ont) const;  // every topic id must exist

  size_t max_phrase_tokens() const { return max_tokens_; }
  size_t size() const { return entries_.size(); }
  const PhraseEntry* find(const std::string& key) const;

  static std::string key_of(const std::vector<std::string>& tokens, size_t begin, size_t count);

 private:
  std::unordered_map<std::string, PhraseEntry> entries_;  // key: tokens joined by ' '
  size_t max_tokens_ = 0;
};

// File format: phrase<TAB>topic_id<TAB>weight.
PhraseDictionary load_dictionary(const std::string& path);

// Sparse topic-frequency map; absent topic means 0.
using BagOfTopics = std::map<std::string, double>;

// Lowercased tokens, Unicode whitespace separated, edge punctuation stripped.
std::vector<std::string> tokenize(std::string_view text);

// "MachineLearning" -> "machine learning"; leading '#' dropped by edge strip.
std::string split_camel_case(std::string_view token);

// Greedy longest-match-first, left to right, non-overlapping token spans.
BagOfTopics topicize(std::string_view text, const PhraseDictionary& dict);

}  // namespace topex
