#include "topex/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "json.hpp"
#include "topex/rank.hpp"
#include "topex/util.hpp"

namespace topex {

uint64_t Rng::splitmix() {
  state_ += 0x9E3779B97F4A7C15ULL;
  uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

uint64_t Rng::next_u64() { return splitmix(); }

double Rng::u01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double Rng::normal() {
  double u1 = 1.0 - u01();  // (0, 1], keeps the log finite
  double u2 = u01();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
}

double Rng::exponential(double mean) { return -mean * std::log(1.0 - u01()); }

int64_t Rng::poisson(double lambda) {
  if (lambda <= 0.0) return 0;
  double u = u01();
  double p = std::exp(-lambda);
  double cum = p;
  int64_t k = 0;
  while (u > cum && k < 2000) {
    ++k;
    p *= lambda / static_cast<double>(k);
    cum += p;
  }
  return k;
}

double Rng::pareto(double minimum, double alpha) {
  // Density proportional to x^-alpha on [minimum, inf); needs alpha > 1.
  double u = u01();
  return minimum * std::pow(1.0 - u, -1.0 / (alpha - 1.0));
}

size_t Rng::uniform_index(size_t n) {
  if (n == 0) return 0;
  return static_cast<size_t>(next_u64() % n);
}

void SynthConfig::validate() const {
  auto fail = [](const std::string& msg) { throw std::runtime_error("synth config: " + msg); };
  if (users < 2) fail("users must be >= 2");
  if (topics < 1) fail("topics must be >= 1");
  if (supers < 1) fail("supers must be >= 1");
  if (evaluations < 0) fail("evaluations must be >= 0");
  if (duplicate_fraction < 0.0 || duplicate_fraction > 1.0) fail("duplicate_fraction must be in [0, 1]");
  if (list_length < 2) fail("list_length must be >= 2");
  if (evaluators < 1) fail("evaluators must be >= 1");
  if (disagreement < 0.0 || disagreement > 0.45) fail("disagreement must be in [0, 0.45]");
  if (connectivity_exponent <= 1.0) fail("connectivity_exponent must be > 1");
  if (topics_per_user < 0.0) fail("topics_per_user must be >= 0");
  if (activity_scale <= 0.0) fail("activity_scale must be > 0");
  if (window_days < 1) fail("window_days must be >= 1");
  if (base_ts < static_cast<int64_t>(window_days) * 86400) fail("base_ts must leave room for the event window");
  for (const auto& [name, value] : signal) {
    if (!network_from_string(name)) fail("signal has unknown network '" + name + "'");
    if (value < 0.0 || value > 1.0) fail("signal for " + name + " must be in [0, 1]");
  }
}

static std::map<std::string, double> default_signal() {
  return {{"TW", 0.9}, {"FB", 0.6}, {"FB_PAGE", 0.5}, {"GP", 0.4}, {"LI", 0.5}, {"WIKI", 0.7}};
}

SynthConfig load_synth_config(const std::string& path) {
  SynthConfig config;
  config.signal = default_signal();
  if (path.empty()) return config;
  require_file(path, "synth config file");
  nlohmann::json doc;
  try {
    std::ifstream in(path);
    doc = nlohmann::json::parse(in);
  } catch (const std::exception& e) {
    throw std::runtime_error("synth config: " + path + ": " + e.what());
  }
  if (!doc.is_object()) throw std::runtime_error("synth config: top level must be an object");
  for (const auto& [key, value] : doc.items()) {
    try {
      if (key == "users") config.users = value.get<int>();
      else if (key == "topics") config.topics = value.get<int>();
      else if (key == "supers") config.supers = value.get<int>();
      else if (key == "evaluations") config.evaluations = value.get<int>();
      else if (key == "duplicate_fraction") config.duplicate_fraction = value.get<double>();
      else if (key == "list_length") config.list_length = value.get<int>();
      else if (key == "evaluators") config.evaluators = value.get<int>();
      else if (key == "disagreement") config.disagreement = value.get<double>();
      else if (key == "connectivity_exponent") config.connectivity_exponent = value.get<double>();
      else if (key == "topics_per_user") config.topics_per_user = value.get<double>();
      else if (key == "activity_scale") config.activity_scale = value.get<double>();
      else if (key == "base_ts") config.base_ts = value.get<int64_t>();
      else if (key == "window_days") config.window_days = value.get<int>();
      else if (key == "signal") {
        if (!value.is_object()) throw std::runtime_error("signal must be an object");
        for (const auto& [net, strength] : value.items()) {
          config.signal[net] = strength.get<double>();
        }
      } else {
        throw std::runtime_error("unknown field");
      }
    } catch (const std::exception& e) {
      throw std::runtime_error("synth config: field '" + key + "': " + e.what());
    }
  }
  config.validate();
  return config;
}

double expected_list_disagreement(double sigma, int n) {
  if (sigma <= 0.0 || n < 2) return 0.0;
  double sum = 0.0;
  double pairs = 0.5 * n * (n - 1);
  for (int g = 1; g < n; ++g) {
    // P(key order flips) for two rankers' keys pos + N(0, sigma):
    // the difference is N(0, sigma*sqrt(2)), flip when it exceeds the gap.
    double p = 0.5 * std::erfc(static_cast<double>(g) / (2.0 * sigma));
    sum += static_cast<double>(n - g) * 2.0 * p * (1.0 - p);
  }
  return sum / pairs;
}

double calibrate_sigma(const std::vector<int>& lengths, double target) {
  if (target <= 0.0) return 0.0;
  double total_pairs = 0.0;
  for (int n : lengths) {
    if (n >= 2) total_pairs += 0.5 * n * (n - 1);
  }
  if (total_pairs == 0.0) return 0.0;
  auto mean_disagreement = [&](double sigma) {
    double sum = 0.0;
    for (int n : lengths) {
      if (n < 2) continue;
      sum += expected_list_disagreement(sigma, n) * 0.5 * n * (n - 1);
    }
    return sum / total_pairs;
  };
  double hi = 1.0;
  while (mean_disagreement(hi) < target && hi < 1e9) hi *= 2.0;
  double lo = 0.0;
  for (int iter = 0; iter < 200; ++iter) {
    double mid = 0.5 * (lo + hi);
    if (mean_disagreement(mid) < target) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

std::vector<PairLabel> synth_votes(size_t pairs, double agreement, Rng& rng) {
  if (agreement < 0.5 || agreement > 1.0) {
    throw std::runtime_error("synth votes: agreement must be in [0.5, 1]");
  }
  // Two independent voters agree with probability q^2 + (1-q)^2.
  double q = 0.5 * (1.0 + std::sqrt(2.0 * agreement - 1.0));
  std::vector<PairLabel> out;
  out.reserve(pairs * 2);
  for (size_t i = 0; i < pairs; ++i) {
    std::string u1 = "vu" + std::to_string(2 * i);
    std::string u2 = "vu" + std::to_string(2 * i + 1);
    for (int v = 0; v < 2; ++v) {
      int label = rng.u01() < q ? 1 : -1;
      out.push_back({u1, u2, "vt", label, v == 0 ? "e1" : "e2"});
    }
  }
  return out;
}

ConnectivityTable synth_connectivity(const SynthConfig& config, Rng& rng) {
  ConnectivityTable table;
  size_t width = std::to_string(config.users - 1).size();
  for (int i = 0; i < config.users; ++i) {
    std::string id = std::to_string(i);
    std::string user = "u" + std::string(width - id.size(), '0') + id;
    ConnectivityVector& v = table[user];
    v["tw_followers"] = std::round(rng.pareto(1.0, config.connectivity_exponent));
    v["fb_friends"] = std::round(rng.pareto(1.0, config.connectivity_exponent));
  }
  return table;
}

namespace {

struct TopicPhrases {
  std::string a;
  std::string b;
  std::string ab;
};

std::string camelize(const std::string& phrase) {
  std::string out;
  bool start = true;
  for (char c : phrase) {
    if (c == ' ') {
      start = true;
      continue;
    }
    out.push_back(start && c >= 'a' && c <= 'z' ? static_cast<char>(c - 'a' + 'A') : c);
    start = false;
  }
  return out;
}

struct Generator {
  Generator(const SynthConfig& c, Rng& r, SynthDataset& o) : config(c), rng(r), out(o) {}

  const SynthConfig& config;
  Rng& rng;
  SynthDataset& out;
  std::vector<std::string> users;
  std::vector<std::string> topic_ids;  // pipeline keys topics by ontology id
  std::vector<TopicPhrases> phrases;
  // Per topic: users with positive latent expertise, strongest first.
  std::vector<std::vector<std::string>> actives;
  std::vector<std::vector<double>> active_x;
  int64_t doc_seq = 0;

  double signal(Network n) const {
    auto it = config.signal.find(std::string(to_string(n)));
    return it == config.signal.end() ? 0.5 : it->second;
  }

  int64_t stamp() {
    double span = 0.9 * 86400.0 * config.window_days;
    return config.base_ts - static_cast<int64_t>(rng.u01() * span);
  }

  // Activity blends latent expertise with independent noise; a zero-signal
  // network runs on noise alone and carries no information about expertise.
  double activity(double x, Network n) {
    double s = signal(n);
    double noise = rng.exponential(1.2);
    return config.activity_scale * (s * std::min(x, 20.0) + (1.0 - s) * std::min(noise, 20.0));
  }

  const std::string& pick_phrase(int topic) {
    const TopicPhrases& p = phrases[topic];
    switch (rng.uniform_index(3)) {
      case 0: return p.a;
      case 1: return p.b;
      default: return p.ab;
    }
  }

  void message(const std::string& user, Network net, Source source, Attribution attr,
               const std::string& text) {
    EventRecord e;
    e.kind = EventKind::MESSAGE;
    e.network = net;
    e.attribution = attr;
    e.subject = user;
    e.ts = stamp();
    e.payload = MessagePayload{text, source};
    out.events.push_back(std::move(e));
  }

  void messages(const std::string& user, Network net, Source source, Attribution attr,
                double lambda, int topic, bool hashtag) {
    int64_t n = rng.poisson(lambda);
    for (int64_t i = 0; i < n; ++i) {
      const std::string& phrase = pick_phrase(topic);
      std::string text = hashtag ? "#" + camelize(phrase) : phrase + " lorem ipsum";
      message(user, net, source, attr, text);
    }
  }

  void build_ontology() {
    for (int i = 0; i < config.supers; ++i) {
      std::string n = std::to_string(i + 1);
      out.ontology.add({"s" + n, "super-" + n, "Super " + n, TopicLevel::SUPER, ""});
    }
    topic_ids.reserve(config.topics);
    phrases.reserve(config.topics);
    for (int j = 0; j < config.topics; ++j) {
      std::string n = std::to_string(j + 1);
      std::string slug = "topic-" + n;
      std::string id = std::to_string(90000000 + j + 1);
      std::string super_id = "s" + std::to_string(j % config.supers + 1);
      out.ontology.add({id, slug, "Topic " + n, TopicLevel::SUB, super_id});
      topic_ids.push_back(id);
      TopicPhrases p;
      p.a = "kw" + n + "a";
      p.b = "kw" + n + "b";
      p.ab = p.a + " " + p.b;
      phrases.push_back(p);
      out.dictionary.push_back({p.a, {id, 1.0}});
      out.dictionary.push_back({p.b, {id, 1.0}});
      out.dictionary.push_back({p.ab, {id, 1.0}});
    }
    out.ontology.validate();
  }

  void build_users() {
    size_t width = std::to_string(config.users - 1).size();
    users.reserve(config.users);
    for (int i = 0; i < config.users; ++i) {
      std::string id = std::to_string(i);
      std::string pad(width - id.size(), '0');
      users.push_back("u" + pad + id);
      out.handles["u" + pad + id] = "User" + pad + id;
    }
  }

  void build_latent() {
    actives.assign(config.topics, {});
    active_x.assign(config.topics, {});
    for (const std::string& user : users) {
      int64_t extra = rng.poisson(config.topics_per_user);
      size_t count = std::min<size_t>(1 + extra, config.topics);
      std::set<size_t> chosen;
      while (chosen.size() < count) chosen.insert(rng.uniform_index(config.topics));
      for (size_t t : chosen) {
        double x = rng.pareto(0.2, 2.2);
        out.latent[{user, topic_ids[t]}] = x;
        actives[t].push_back(user);
        active_x[t].push_back(x);
      }
    }
    // Strongest first; stable tie order by user id.
    for (int t = 0; t < config.topics; ++t) {
      std::vector<size_t> idx(actives[t].size());
      for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
      std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) {
        if (active_x[t][a] != active_x[t][b]) return active_x[t][a] > active_x[t][b];
        return actives[t][a] < actives[t][b];
      });
      std::vector<std::string> u(idx.size());
      std::vector<double> x(idx.size());
      for (size_t i = 0; i < idx.size(); ++i) {
        u[i] = actives[t][idx[i]];
        x[i] = active_x[t][idx[i]];
      }
      actives[t] = std::move(u);
      active_x[t] = std::move(x);
    }
  }

  void tw_events(const std::string& user, int topic, double x, int64_t& member_lists) {
    double a = activity(x, Network::TW);
    messages(user, Network::TW, Source::MSG_TEXT, Attribution::GENERATED, 3.0 * a, topic, false);
    messages(user, Network::TW, Source::MSG_TEXT, Attribution::REACTED, 2.0 * a, topic, false);
    messages(user, Network::TW, Source::MSG_TEXT, Attribution::CREDITED, 1.5 * a, topic, false);
    messages(user, Network::TW, Source::HASHTAG, Attribution::GENERATED, 1.0 * a, topic, true);
    messages(user, Network::TW, Source::HASHTAG, Attribution::REACTED, 0.7 * a, topic, true);
    messages(user, Network::TW, Source::HASHTAG, Attribution::CREDITED, 0.5 * a, topic, true);
    messages(user, Network::TW, Source::URL, Attribution::GENERATED, 0.8 * a, topic, false);
    messages(user, Network::TW, Source::URL, Attribution::REACTED, 0.6 * a, topic, false);
    messages(user, Network::TW, Source::URL_META, Attribution::GENERATED, 0.6 * a, topic, false);
    messages(user, Network::TW, Source::URL_META, Attribution::REACTED, 0.4 * a, topic, false);

    int64_t member = rng.poisson(2.0 * a);
    member_lists += member;
    for (int64_t i = 0; i < member; ++i) {
      EventRecord e;
      e.kind = EventKind::LIST;
      e.network = Network::TW;
      e.attribution = Attribution::CREDITED;
      e.subject = user;
      e.ts = stamp();
      e.payload = ListPayload{pick_phrase(topic), ListRole::MEMBER};
      out.events.push_back(std::move(e));
    }
    int64_t owned = rng.poisson(0.4 * a);
    int64_t subscribed = rng.poisson(0.2 * a);
    for (int64_t i = 0; i < owned + subscribed; ++i) {
      EventRecord e;
      e.kind = EventKind::LIST;
      e.network = Network::TW;
      e.attribution = Attribution::GENERATED;
      e.subject = user;
      e.ts = stamp();
      e.payload = ListPayload{pick_phrase(topic), i < owned ? ListRole::CREATOR : ListRole::SUBSCRIBER};
      out.events.push_back(std::move(e));
    }

    int64_t docs = rng.poisson(0.4 * a);
    for (int64_t i = 0; i < docs; ++i) {
      EventRecord e;
      e.kind = EventKind::SHARED_DOC;
      e.network = Network::TW;
      e.attribution = Attribution::GENERATED;
      e.subject = user;
      e.ts = stamp();
      e.payload = SharedDocPayload{"d" + std::to_string(doc_seq++), pick_phrase(topic), rng.poisson(4.0 * a)};
      out.events.push_back(std::move(e));
    }
  }

  void fb_events(const std::string& user, int topic, double x) {
    double a = activity(x, Network::FB);
    messages(user, Network::FB, Source::MSG_TEXT, Attribution::GENERATED, 2.0 * a, topic, false);
    messages(user, Network::FB, Source::MSG_TEXT, Attribution::REACTED, 1.2 * a, topic, false);
    messages(user, Network::FB, Source::MSG_TEXT, Attribution::CREDITED, 0.8 * a, topic, false);
    messages(user, Network::FB, Source::HASHTAG, Attribution::GENERATED, 0.5 * a, topic, true);
    messages(user, Network::FB, Source::URL, Attribution::GENERATED, 0.5 * a, topic, false);
    messages(user, Network::FB, Source::URL, Attribution::REACTED, 0.4 * a, topic, false);
    messages(user, Network::FB, Source::URL_META, Attribution::GENERATED, 0.4 * a, topic, false);
    messages(user, Network::FB, Source::URL_META, Attribution::REACTED, 0.3 * a, topic, false);
  }

  void fb_page_events(const std::string& user, int topic, double x) {
    double a = activity(x, Network::FB_PAGE);
    messages(user, Network::FB_PAGE, Source::PAGE_TEXT, Attribution::GENERATED, 1.5 * a, topic, false);
    messages(user, Network::FB_PAGE, Source::PAGE_TEXT, Attribution::REACTED, 1.0 * a, topic, false);
  }

  void gp_events(const std::string& user, int topic, double x) {
    double a = activity(x, Network::GP);
    messages(user, Network::GP, Source::MSG_TEXT, Attribution::GENERATED, 1.5 * a, topic, false);
    messages(user, Network::GP, Source::MSG_TEXT, Attribution::REACTED, 1.0 * a, topic, false);
    messages(user, Network::GP, Source::MSG_TEXT, Attribution::CREDITED, 0.7 * a, topic, false);
    messages(user, Network::GP, Source::HASHTAG, Attribution::GENERATED, 0.4 * a, topic, true);
    messages(user, Network::GP, Source::URL, Attribution::GENERATED, 0.4 * a, topic, false);
    messages(user, Network::GP, Source::URL, Attribution::REACTED, 0.3 * a, topic, false);
    messages(user, Network::GP, Source::URL_META, Attribution::GENERATED, 0.3 * a, topic, false);
    messages(user, Network::GP, Source::URL_META, Attribution::REACTED, 0.2 * a, topic, false);
  }

  void li_skill_event(const std::string& user, int topic, double x) {
    double s = signal(Network::LI);
    if (rng.u01() >= std::min(0.9, 0.3 + 0.3 * s * std::min(x, 2.0))) return;
    EventRecord e;
    e.kind = EventKind::PROFILE_FIELD;
    e.network = Network::LI;
    e.attribution = Attribution::GENERATED;
    e.subject = user;
    e.ts = stamp();
    ProfileFieldPayload p;
    p.field = ProfileField::SKILLS;
    p.text = pick_phrase(topic);
    e.payload = p;
    out.events.push_back(std::move(e));
  }

  void per_user_events(const std::string& user, const std::vector<std::pair<int, double>>& owned,
                       int64_t member_lists) {
    if (member_lists > 0) {
      EventRecord e;
      e.kind = EventKind::PROFILE_FIELD;
      e.network = Network::TW;
      e.attribution = Attribution::GENERATED;
      e.subject = user;
      e.ts = stamp();
      ProfileFieldPayload p;
      p.field = ProfileField::LIST_TOTAL;
      // The platform total exceeds what ingestion collected.
      p.count = static_cast<int64_t>(std::llround(member_lists / 0.7));
      e.payload = p;
      out.events.push_back(std::move(e));
    }

    int best = owned.front().first;
    double best_x = owned.front().second;
    for (const auto& [t, x] : owned) {
      if (x > best_x) {
        best = t;
        best_x = x;
      }
    }

    {
      double s = signal(Network::LI);
      double noise = rng.exponential(1.2);
      double level = s * std::min(best_x, 3.0) / 3.0 + (1.0 - s) * std::min(noise, 3.0) / 3.0;
      EventRecord e;
      e.kind = EventKind::PROFILE_FIELD;
      e.network = Network::LI;
      e.attribution = Attribution::GENERATED;
      e.subject = user;
      e.ts = stamp();
      ProfileFieldPayload p;
      p.field = ProfileField::INDUSTRY;
      p.text = phrases[best].a;
      p.company_followers = 100.0 + static_cast<double>(rng.poisson(900.0 * level));
      p.industry_followers = 10000.0;
      e.payload = p;
      out.events.push_back(std::move(e));
    }

    if (best_x > 2.0) {
      double s = signal(Network::WIKI);
      double noise = rng.exponential(1.2);
      double level = s * std::min(best_x, 5.0) / 5.0 + (1.0 - s) * std::min(noise, 5.0) / 5.0;
      std::string text;
      for (const auto& [t, x] : owned) {
        if (!text.empty()) text += " ";
        text += phrases[t].ab;
      }
      text += " lorem";
      EventRecord e;
      e.kind = EventKind::WIKI_PAGE;
      e.network = Network::WIKI;
      e.attribution = Attribution::CREDITED;
      e.subject = user;
      e.ts = stamp();
      e.payload = WikiPagePayload{text, 1 + rng.poisson(30.0 * level), 10 + rng.poisson(10.0)};
      out.events.push_back(std::move(e));
    }
  }

  std::string biased_peer(const std::string& user, const std::vector<std::pair<int, double>>& owned) {
    for (int attempt = 0; attempt < 8; ++attempt) {
      std::string candidate;
      if (rng.u01() < 0.7) {
        int t = owned[rng.uniform_index(owned.size())].first;
        const std::vector<std::string>& pool = actives[t];
        if (pool.size() < 2) continue;
        candidate = pool[rng.uniform_index(pool.size())];
      } else {
        candidate = users[rng.uniform_index(users.size())];
      }
      if (candidate != user) return candidate;
    }
    return std::string();
  }

  void graph_events(const std::string& user, const std::vector<std::pair<int, double>>& owned) {
    double tw_degree = 0.0;
    double fb_degree = 0.0;
    auto it = out.connectivity.find(user);
    if (it != out.connectivity.end()) {
      tw_degree = it->second["tw_followers"];
      fb_degree = it->second["fb_friends"];
    }
    struct Plan {
      EdgeSet set;
      Network net;
      int count;
    };
    Plan plans[3] = {
        {EdgeSet::FOLLOWERS, Network::TW, static_cast<int>(std::min(tw_degree, 30.0))},
        {EdgeSet::FOLLOWING, Network::TW, static_cast<int>(3 + rng.poisson(2.0))},
        {EdgeSet::FRIENDS, Network::FB, static_cast<int>(std::min(fb_degree, 20.0))},
    };
    for (const Plan& plan : plans) {
      std::set<std::string> chosen;
      for (int i = 0; i < plan.count; ++i) {
        std::string actor = biased_peer(user, owned);
        if (actor.empty() || !chosen.insert(actor).second) continue;
        EventRecord e;
        e.kind = EventKind::GRAPH_EDGE;
        e.network = plan.net;
        e.attribution = Attribution::GRAPH;
        e.subject = user;
        e.ts = stamp();
        e.payload = GraphEdgePayload{actor, plan.set};
        out.events.push_back(std::move(e));
      }
    }
  }

  void build_events() {
    for (const std::string& user : users) {
      std::vector<std::pair<int, double>> owned;  // topic index, expertise
      for (int t = 0; t < config.topics; ++t) {
        auto it = out.latent.find({user, topic_ids[t]});
        if (it != out.latent.end()) owned.push_back({t, it->second});
      }
      if (owned.empty()) continue;
      int64_t member_lists = 0;
      for (const auto& [t, x] : owned) {
        tw_events(user, t, x, member_lists);
        fb_events(user, t, x);
        fb_page_events(user, t, x);
        gp_events(user, t, x);
        li_skill_event(user, t, x);
      }
      per_user_events(user, owned, member_lists);
      graph_events(user, owned);
    }
  }

  void build_evaluations() {
    std::vector<int> eligible;
    for (int t = 0; t < config.topics; ++t) {
      if (actives[t].size() >= 2) eligible.push_back(t);
    }
    if (eligible.empty() || config.evaluations == 0) return;

    struct Plan {
      int topic;
      std::vector<size_t> picks;  // indices into actives[topic], ascending = best first
      bool duplicated;
      std::string unsortable;
    };
    std::vector<Plan> plans;
    std::vector<int> lengths;
    plans.reserve(config.evaluations);
    for (int e = 0; e < config.evaluations; ++e) {
      Plan plan;
      plan.topic = eligible[rng.uniform_index(eligible.size())];
      size_t avail = actives[plan.topic].size();
      int64_t jitter = rng.poisson(2.0);
      size_t want = static_cast<size_t>(std::max<int64_t>(2, config.list_length - 2 + jitter));
      want = std::min(want, avail);
      std::set<size_t> chosen;
      while (chosen.size() < want) chosen.insert(rng.uniform_index(avail));
      plan.picks.assign(chosen.begin(), chosen.end());
      plan.duplicated = rng.u01() < config.duplicate_fraction;
      if (rng.u01() < 0.1 && avail > want) {
        for (int attempt = 0; attempt < 50; ++attempt) {
          size_t extra = rng.uniform_index(avail);
          if (!chosen.count(extra)) {
            plan.unsortable = actives[plan.topic][extra];
            break;
          }
        }
      }
      plans.push_back(std::move(plan));
      lengths.push_back(static_cast<int>(want));
      if (plans.back().duplicated) lengths.push_back(static_cast<int>(want));
    }

    out.calibrated_sigma = calibrate_sigma(lengths, config.disagreement);

    auto rank_once = [&](const Plan& plan, const std::string& evaluator) {
      size_t n = plan.picks.size();
      std::vector<std::pair<double, size_t>> keyed(n);
      for (size_t i = 0; i < n; ++i) {
        double key = static_cast<double>(i);
        if (out.calibrated_sigma > 0.0) key += out.calibrated_sigma * rng.normal();
        keyed[i] = {key, i};
      }
      std::sort(keyed.begin(), keyed.end());
      SortedEvaluation eval;
      eval.evaluator = evaluator;
      eval.topic = topic_ids[plan.topic];
      for (const auto& [key, i] : keyed) {
        eval.users.push_back(actives[plan.topic][plan.picks[i]]);
      }
      if (!plan.unsortable.empty()) eval.unsortable.push_back(plan.unsortable);
      out.evaluations.push_back(std::move(eval));
    };

    for (const Plan& plan : plans) {
      size_t first = rng.uniform_index(config.evaluators);
      rank_once(plan, "e" + std::to_string(first + 1));
      if (plan.duplicated) {
        size_t second = first;
        if (config.evaluators > 1) {
          second = (first + 1 + rng.uniform_index(config.evaluators - 1)) % config.evaluators;
        }
        rank_once(plan, "e" + std::to_string(second + 1));
      }
    }
  }
};

}  // namespace

SynthDataset synth_generate(const SynthConfig& config, uint64_t seed) {
  config.validate();
  SynthDataset out;
  Rng rng(seed);
  Generator gen(config, rng, out);
  gen.build_ontology();
  gen.build_users();
  gen.build_latent();
  out.connectivity = synth_connectivity(config, rng);
  gen.build_events();
  gen.build_evaluations();
  return out;
}

void save_synth_dataset(const SynthDataset& dataset, const std::string& dir) {
  save_ontology(dataset.ontology, dir + "/ontology.tsv");
  {
    std::ostringstream body;
    body << "# dictionary\tphrase\ttopic\tweight\n";
    for (const auto& [phrase, entry] : dataset.dictionary) {
      body << phrase << '\t' << entry.first << '\t' << format_double(entry.second) << '\n';
    }
    write_file(dir + "/dictionary.tsv", body.str());
  }
  write_events(dataset.events, dir + "/events.jsonl");
  save_evaluations(dataset.evaluations, dir + "/groundtruth.tsv");
  save_connectivity(dataset.connectivity, dir + "/connectivity.tsv");
  save_handles(dataset.handles, dir + "/handles.tsv");
  {
    std::ostringstream body;
    body << "# latent\tuser\ttopic\texpertise\n";
    for (const auto& [key, x] : dataset.latent) {
      body << key.first << '\t' << key.second << '\t' << format_double(x) << '\n';
    }
    write_file(dir + "/latent.tsv", body.str());
  }
}

}  // namespace topex
