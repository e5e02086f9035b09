#include "topex/rank.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "topex/util.hpp"

namespace topex {

RankedIndex RankedIndex::build(const std::vector<ScoreRow>& scores, const TopicOntology& ont,
                               const std::map<std::string, std::string>& handles) {
  RankedIndex index;
  index.handles_ = handles;

  std::map<std::string, std::vector<const ScoreRow*>> by_topic;
  for (const auto& row : scores) {
    if (!(row.score > 0.0)) continue;
    by_topic[row.topic].push_back(&row);
  }

  for (auto& [topic_id, rows] : by_topic) {
    const TopicNode* node = ont.find(topic_id);
    if (!node) throw std::runtime_error("rank: scores reference unknown topic " + topic_id);
    std::sort(rows.begin(), rows.end(), [](const ScoreRow* a, const ScoreRow* b) {
      if (a->score != b->score) return a->score > b->score;
      return a->user < b->user;
    });
    std::vector<RankEntry> entries;
    entries.reserve(rows.size());
    double denom = static_cast<double>(rows.size() + 1);
    for (size_t i = 0; i < rows.size(); ++i) {
      RankEntry e;
      e.user = rows[i]->user;
      e.score = rows[i]->score;
      e.rank = i + 1;
      e.percentile = 1.0 - static_cast<double>(i + 1) / denom;
      entries.push_back(std::move(e));
    }
    index.rankings_.emplace(topic_id, std::move(entries));
    index.topics_.emplace(topic_id, TopicMeta{topic_id, node->slug, node->display_name});
    index.id_by_slug_.emplace(node->slug, topic_id);
  }

  index.finalize_user_view();
  return index;
}

void RankedIndex::finalize_user_view() {
  user_by_handle_.clear();
  by_user_.clear();
  for (const auto& [user, handle] : handles_) user_by_handle_[handle] = user;
  for (const auto& [topic_id, entries] : rankings_) {
    const TopicMeta& meta = topics_.at(topic_id);
    for (const auto& e : entries) {
      by_user_[e.user].push_back({topic_id, meta.slug, meta.display_name, e.percentile});
    }
  }
  for (auto& [user, topics] : by_user_) {
    std::sort(topics.begin(), topics.end(), [](const UserTopicEntry& a, const UserTopicEntry& b) {
      if (a.percentile != b.percentile) return a.percentile > b.percentile;
      return a.slug < b.slug;
    });
  }
}

const std::vector<RankEntry>* RankedIndex::ranking_by_slug(const std::string& slug) const {
  auto it = id_by_slug_.find(slug);
  if (it == id_by_slug_.end()) return nullptr;
  return &rankings_.at(it->second);
}

std::vector<RankEntry> RankedIndex::top_experts(const std::string& slug, size_t k) const {
  const auto* entries = ranking_by_slug(slug);
  if (!entries) return {};
  size_t n = std::min(k, entries->size());
  return {entries->begin(), entries->begin() + static_cast<ptrdiff_t>(n)};
}

std::vector<UserTopicEntry> RankedIndex::user_topics(const std::string& username) const {
  std::string user = username;
  auto hit = user_by_handle_.find(username);
  if (hit != user_by_handle_.end()) user = hit->second;
  auto it = by_user_.find(user);
  if (it == by_user_.end()) return {};
  return it->second;
}

const std::string* RankedIndex::handle_of(const std::string& user) const {
  auto it = handles_.find(user);
  return it == handles_.end() ? nullptr : &it->second;
}

void RankedIndex::save(const std::string& dir) const {
  namespace fs = std::filesystem;
  fs::create_directories(fs::path(dir) / "rankings");

  std::ostringstream topics;
  topics << "# topics\tid\tslug\tdisplay_name\tentries\n";
  for (const auto& [topic_id, meta] : topics_) {
    topics << topic_id << '\t' << meta.slug << '\t' << meta.display_name << '\t'
           << rankings_.at(topic_id).size() << "\n";
  }
  write_file((fs::path(dir) / "topics.tsv").string(), topics.str());

  std::ostringstream handles;
  handles << "# handles\tuser\tusername\n";
  for (const auto& [user, handle] : handles_) handles << user << '\t' << handle << "\n";
  write_file((fs::path(dir) / "handles.tsv").string(), handles.str());

  for (const auto& [topic_id, entries] : rankings_) {
    const TopicMeta& meta = topics_.at(topic_id);
    std::ostringstream out;
    out << "# ranking\ttopic=" << topic_id << "\tslug=" << meta.slug << "\tdisplay_name="
        << meta.display_name << "\n";
    for (const auto& e : entries) {
      out << e.rank << '\t' << e.user << '\t' << format_double(e.score) << '\t'
          << format_double(e.percentile) << "\n";
    }
    write_file((fs::path(dir) / "rankings" / (meta.slug + ".tsv")).string(), out.str());
  }
}

RankedIndex RankedIndex::load(const std::string& dir) {
  namespace fs = std::filesystem;
  RankedIndex index;

  std::string topics_path = (fs::path(dir) / "topics.tsv").string();
  require_file(topics_path, "index topics file");
  {
    std::ifstream in(topics_path);
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty() || line[0] == '#') continue;
      auto fields = split(line, '\t');
      if (fields.size() != 4) {
        throw std::runtime_error(topics_path + ": line " + std::to_string(line_no) +
                                 ": expected 4 fields");
      }
      index.topics_.emplace(fields[0], TopicMeta{fields[0], fields[1], fields[2]});
      index.id_by_slug_.emplace(fields[1], fields[0]);
    }
  }

  std::string handles_path = (fs::path(dir) / "handles.tsv").string();
  if (fs::exists(handles_path)) index.handles_ = load_handles(handles_path);

  for (const auto& [topic_id, meta] : index.topics_) {
    std::string path = (fs::path(dir) / "rankings" / (meta.slug + ".tsv")).string();
    require_file(path, "index ranking file for " + meta.slug);
    std::ifstream in(path);
    std::string line;
    size_t line_no = 0;
    std::vector<RankEntry> entries;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty() || line[0] == '#') continue;
      auto fields = split(line, '\t');
      if (fields.size() != 4) {
        throw std::runtime_error(path + ": line " + std::to_string(line_no) + ": expected 4 fields");
      }
      RankEntry e;
      e.rank = static_cast<size_t>(parse_int(fields[0], path + " rank"));
      e.user = fields[1];
      e.score = parse_double(fields[2], path + " score");
      e.percentile = parse_double(fields[3], path + " percentile");
      if (e.rank != entries.size() + 1) {
        throw std::runtime_error(path + ": line " + std::to_string(line_no) +
                                 ": ranks must be contiguous from 1");
      }
      entries.push_back(std::move(e));
    }
    index.rankings_.emplace(topic_id, std::move(entries));
  }

  index.finalize_user_view();
  return index;
}

std::map<std::string, std::string> load_handles(const std::string& path) {
  require_file(path, "handles file");
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::map<std::string, std::string> out;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    auto fields = split(line, '\t');
    if (fields.size() != 2) {
      throw std::runtime_error(path + ": line " + std::to_string(line_no) + ": expected 2 fields");
    }
    out[fields[0]] = fields[1];
  }
  return out;
}

void save_handles(const std::map<std::string, std::string>& handles, const std::string& path) {
  std::ostringstream out;
  out << "# handles\tuser\tusername\n";
  for (const auto& [user, handle] : handles) out << user << '\t' << handle << "\n";
  write_file(path, out.str());
}

}  // namespace topex
