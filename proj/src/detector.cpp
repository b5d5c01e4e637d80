#include "shamfinder/detector.hpp"

#include <algorithm>
#include <chrono>
#include <queue>
#include <set>
#include <thread>
#include <unordered_map>

#include "shamfinder/utf8.hpp"

namespace shamfinder {

std::optional<std::vector<Diff>> is_homograph(std::u32string_view reference, std::u32string_view candidate,
                                              const HomoglyphDB& db) {
  if (reference.size() != candidate.size()) return std::nullopt;
  std::vector<Diff> diffs;
  for (std::size_t i = 0; i < reference.size(); ++i) {
    const CodePoint r = reference[i];
    const CodePoint x = candidate[i];
    if (r == x) continue;
    const auto* pair = db.find(r, x);
    if (!pair) return std::nullopt;
    diffs.push_back({i, r, x, pair->source, pair->delta});
  }
  if (diffs.empty()) return std::nullopt;
  return diffs;
}

namespace {

// IDN second-level labels bucketed by length, then by first character.
struct LabelIndex {
  std::vector<std::u32string> labels;
  std::vector<std::size_t> corpus_index;
  std::unordered_map<std::size_t, std::unordered_map<CodePoint, std::vector<std::uint32_t>>> buckets;

  const std::vector<std::uint32_t>* group(std::size_t len, CodePoint first) const {
    auto b = buckets.find(len);
    if (b == buckets.end()) return nullptr;
    auto g = b->second.find(first);
    return g == b->second.end() ? nullptr : &g->second;
  }
};

}  // namespace

std::vector<HomographMatch> detect(const ReferenceSet& refs, const DomainCorpus& corpus, const HomoglyphDB& db,
                                   unsigned workers, DetectReport* report) {
  const auto start = std::chrono::steady_clock::now();
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());

  LabelIndex index;
  std::size_t undecodable = 0;
  for (std::size_t idx : corpus.idns) {
    const auto& d = corpus.all[idx];
    if (!d.decodable()) {
      ++undecodable;
      continue;
    }
    auto label = d.second_level();
    if (label.empty()) continue;
    const auto id = static_cast<std::uint32_t>(index.labels.size());
    index.buckets[label.size()][label.front()].push_back(id);
    index.labels.push_back(std::move(label));
    index.corpus_index.push_back(idx);
  }

  const auto& entries = refs.entries();
  std::vector<std::vector<HomographMatch>> found(workers);
  std::vector<std::size_t> compared(workers, 0);
  auto scan = [&](unsigned w) {
    auto& out = found[w];
    std::size_t count = 0;
    for (std::size_t k = w; k < entries.size(); k += workers) {
      const auto& ref = entries[k];
      if (ref.label.empty()) continue;
      const CodePoint first = ref.label.front();
      auto visit = [&](CodePoint c) {
        const auto* group = index.group(ref.label.size(), c);
        if (!group) return;
        for (std::uint32_t id : *group) {
          ++count;
          if (auto diffs = is_homograph(ref.label, index.labels[id], db))
            out.push_back({ref.text, ref.rank, &corpus.all[index.corpus_index[id]], std::move(*diffs)});
        }
      };
      visit(first);
      for (CodePoint p : db.partners(first)) visit(p);
    }
    compared[w] = count;
  };
  if (workers == 1) {
    scan(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(scan, w);
  }

  std::vector<HomographMatch> matches;
  for (auto& part : found)
    matches.insert(matches.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
  std::sort(matches.begin(), matches.end(), [](const HomographMatch& a, const HomographMatch& b) {
    return std::tie(a.reference_rank, a.reference, a.idn->ascii_form) <
           std::tie(b.reference_rank, b.reference, b.idn->ascii_form);
  });

  if (report) {
    report->references = entries.size();
    report->idns_scanned = index.labels.size();
    report->undecodable = undecodable;
    report->comparisons = 0;
    for (auto c : compared) report->comparisons += c;
    report->seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
  return matches;
}

RevertResult revert(std::u32string_view label, const HomoglyphDB& db, std::size_t cap) {
  struct Option {
    CodePoint cp;
    int delta;
    std::optional<int> raw_delta;
  };
  RevertResult result;
  std::vector<std::vector<Option>> options(label.size());
  std::vector<std::size_t> varying;
  for (std::size_t i = 0; i < label.size(); ++i) {
    const CodePoint c = label[i];
    if (c < 0x80) {
      options[i].push_back({c, 0, std::nullopt});
      continue;
    }
    for (CodePoint p : db.partners(c)) {
      if (!is_latin_target(p)) continue;
      const auto* pair = db.find(c, p);
      options[i].push_back({p, pair->delta.value_or(0), pair->delta});
    }
    if (options[i].empty()) return result;
    std::sort(options[i].begin(), options[i].end(),
              [](const Option& a, const Option& b) { return std::tie(a.delta, a.cp) < std::tie(b.delta, b.cp); });
    varying.push_back(i);
  }
  if (cap == 0) {
    result.truncated = true;
    return result;
  }

  using Choice = std::vector<std::uint16_t>;
  auto make = [&](const Choice& choice) {
    RevertCandidate cand;
    std::u32string text(label);
    for (std::size_t v = 0; v < varying.size(); ++v) {
      const std::size_t pos = varying[v];
      const auto& opt = options[pos][choice[v]];
      text[pos] = opt.cp;
      cand.total_delta += opt.delta;
      cand.details.push_back({pos, label[pos], opt.cp, opt.raw_delta});
    }
    cand.substitutions = static_cast<int>(varying.size());
    cand.original = utf8::encode(text);
    return cand;
  };

  // Best-first over the cartesian product: every successor bumps one
  // position to its next-cheapest partner, so totals never decrease.
  struct Node {
    int total;
    std::string text;
    Choice choice;
    bool operator>(const Node& o) const { return std::tie(total, text) > std::tie(o.total, o.text); }
  };
  std::priority_queue<Node, std::vector<Node>, std::greater<>> frontier;
  std::set<Choice> seen;
  auto push = [&](Choice choice) {
    if (!seen.insert(choice).second) return;
    auto cand = make(choice);
    frontier.push({cand.total_delta, std::move(cand.original), std::move(choice)});
  };
  push(Choice(varying.size(), 0));
  while (!frontier.empty()) {
    if (result.candidates.size() == cap) {
      result.truncated = true;
      break;
    }
    Node node = frontier.top();
    frontier.pop();
    result.candidates.push_back(make(node.choice));
    for (std::size_t v = 0; v < varying.size(); ++v) {
      if (node.choice[v] + 1u >= options[varying[v]].size()) continue;
      Choice next = node.choice;
      ++next[v];
      push(std::move(next));
    }
  }
  std::sort(result.candidates.begin(), result.candidates.end(), [](const RevertCandidate& a, const RevertCandidate& b) {
    return std::tie(a.substitutions, a.total_delta, a.original) < std::tie(b.substitutions, b.total_delta, b.original);
  });
  return result;
}

}  // namespace shamfinder
