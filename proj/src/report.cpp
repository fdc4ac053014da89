#include "cca/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "cca/error.hpp"
#include "cca/text.hpp"

namespace cca {

using ordered_json = nlohmann::ordered_json;

std::vector<std::string> CodedCitation::rule_trace() const {
  std::vector<std::string> out;
  for (const auto& c : codes) out.insert(out.end(), c.rules.begin(), c.rules.end());
  return out;
}

CodedCitation assemble_record(std::string_view doc_id, const InTextCitation& citation, const CitationContext& context,
                              std::span<const std::optional<Code>> codes, std::vector<MatchedCue> cues,
                              int mention_count) {
  if (codes.size() != kCategoryCount) {
    throw Error(ErrorKind::incomplete_coding, "expected 12 category slots, got " + std::to_string(codes.size()));
  }
  CodedCitation r;
  r.doc_id = std::string(doc_id);
  r.citation_id = citation.citation_id;
  r.ref_id = citation.ref_id;
  r.sentence_index = citation.sentence_index;
  r.context_level = context.level;
  r.context_sentences = context.sentence_indices;
  for (std::size_t i = 0; i < kCategoryCount; ++i) {
    const Category cat = kAllCategories[i];
    const std::string where =
        std::string(doc_id) + "#" + std::to_string(citation.citation_id) + " category " + std::string(1, letter(cat));
    if (!codes[i]) throw Error(ErrorKind::incomplete_coding, where + " was not coded");
    const Code& c = *codes[i];
    if (c.category != cat) throw Error(ErrorKind::incomplete_coding, where + " holds a code of another category");
    if (!c.codable() && c.reason.empty()) throw Error(ErrorKind::incomplete_coding, where + " is uncodable without a reason");
    if (c.codable() && (c.value > value_count(cat) || c.rules.empty())) {
      throw Error(ErrorKind::incomplete_coding, where + " has no rule trace or an out-of-range value");
    }
    r.codes[i] = c;
  }
  r.matched_cues = std::move(cues);
  r.mention_count = mention_count;
  return r;
}

void sort_records(std::vector<CodedCitation>& records) {
  std::sort(records.begin(), records.end(), [](const CodedCitation& a, const CodedCitation& b) {
    return std::tie(a.doc_id, a.citation_id) < std::tie(b.doc_id, b.citation_id);
  });
}

// ---------------------------------------------------------------------------
// JSONL

std::string to_json_line(const CodedCitation& r) {
  ordered_json j;
  j["doc_id"] = r.doc_id;
  j["citation_id"] = r.citation_id;
  j["ref_id"] = r.ref_id;
  j["sentence_index"] = r.sentence_index;
  j["context_level"] = to_string(r.context_level);
  j["context_sentences"] = r.context_sentences;
  ordered_json codes = ordered_json::object();
  ordered_json specify = ordered_json::object();
  ordered_json reasons = ordered_json::object();
  for (const auto& c : r.codes) {
    const std::string key(1, letter(c.category));
    codes[key] = c.label();
    if (!c.payload.empty()) specify[key] = c.payload;
    if (!c.codable()) reasons[key] = c.reason;
  }
  j["codes"] = std::move(codes);
  j["specify"] = std::move(specify);
  j["uncodable_reasons"] = std::move(reasons);
  ordered_json cues = ordered_json::array();
  for (const auto& m : r.matched_cues) {
    cues.push_back(ordered_json{{"category", std::string(1, letter(m.category))}, {"phrase", m.phrase}, {"tag", m.tag}});
  }
  j["matched_cues"] = std::move(cues);
  j["rule_trace"] = r.rule_trace();
  j["mention_count"] = r.mention_count;
  return j.dump();
}

std::string to_jsonl(std::span<const CodedCitation> records) {
  std::string out;
  for (const auto& r : records) {
    out += to_json_line(r);
    out.push_back('\n');
  }
  return out;
}

namespace {

template <typename Fn>
void for_each_json_line(std::string_view input, Fn&& fn) {
  std::istringstream in{std::string(input)};
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (text::trim(line).empty()) continue;
    try {
      fn(nlohmann::json::parse(line), number);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorKind::malformed_input, e.what(), number);
    }
  }
}

Category category_key(const std::string& key, std::size_t line) {
  const auto c = parse_category(key);
  if (!c) throw Error(ErrorKind::unknown_category, "unknown category '" + key + "'", line);
  return *c;
}

int label_value(Category c, const std::string& s, std::size_t line) {
  const auto v = parse_label(c, s);
  if (!v) throw Error(ErrorKind::malformed_input, "bad label '" + s + "' for category " + std::string(1, letter(c)), line);
  return *v;
}

}  // namespace

std::vector<CodedCitation> read_jsonl(std::string_view input) {
  std::vector<CodedCitation> out;
  for_each_json_line(input, [&](const nlohmann::json& j, std::size_t line) {
    CodedCitation r;
    r.doc_id = j.at("doc_id").get<std::string>();
    r.citation_id = j.at("citation_id").get<int>();
    r.ref_id = j.at("ref_id").get<std::string>();
    r.sentence_index = j.at("sentence_index").get<std::size_t>();
    const auto level = j.at("context_level").get<std::string>();
    if (level != "single_sentence" && level != "sentence_cluster") {
      throw Error(ErrorKind::malformed_input, "bad context_level '" + level + "'", line);
    }
    r.context_level = level == "single_sentence" ? ContextLevel::single_sentence : ContextLevel::sentence_cluster;
    r.context_sentences = j.at("context_sentences").get<std::vector<std::size_t>>();
    std::array<bool, kCategoryCount> seen{};
    for (const auto& [key, value] : j.at("codes").items()) {
      const Category c = category_key(key, line);
      auto& code = r.codes[static_cast<std::size_t>(c)];
      code.category = c;
      code.value = label_value(c, value.get<std::string>(), line);
      seen[static_cast<std::size_t>(c)] = true;
    }
    if (std::find(seen.begin(), seen.end(), false) != seen.end()) {
      throw Error(ErrorKind::malformed_input, "record lacks some category codes", line);
    }
    const auto specify = j.value("specify", nlohmann::json::object());
    const auto reasons = j.value("uncodable_reasons", nlohmann::json::object());
    const auto cues = j.value("matched_cues", nlohmann::json::array());
    for (const auto& [key, value] : specify.items()) {
      r.codes[static_cast<std::size_t>(category_key(key, line))].payload = value.get<std::string>();
    }
    for (const auto& [key, value] : reasons.items()) {
      r.codes[static_cast<std::size_t>(category_key(key, line))].reason = value.get<std::string>();
    }
    for (const auto& m : cues) {
      r.matched_cues.push_back(MatchedCue{category_key(m.at("category").get<std::string>(), line),
                                          m.at("phrase").get<std::string>(), m.at("tag").get<std::string>()});
    }
    // Rule ids carry their category letter as prefix ("A:proceedings").
    for (const auto& rule : j.value("rule_trace", std::vector<std::string>{})) {
      r.codes[static_cast<std::size_t>(category_key(rule.substr(0, rule.find(':')), line))].rules.push_back(rule);
    }
    r.mention_count = j.value("mention_count", 0);
    out.push_back(std::move(r));
  });
  return out;
}

// ---------------------------------------------------------------------------
// Tables

FrequencyTable::FrequencyTable(Category r, std::optional<Category> c) : rows(r), cols(c) {
  row_labels = labels(r);
  col_labels = c ? labels(*c) : std::vector<std::string>{"count"};
  counts.assign(row_labels.size(), std::vector<long>(col_labels.size(), 0));
}

namespace {

// labels() lists values 1..n then "uncodable", so value 0 sits last.
std::size_t slot(const Code& c) {
  return c.codable() ? static_cast<std::size_t>(c.value - 1) : static_cast<std::size_t>(value_count(c.category));
}

}  // namespace

void FrequencyTable::add(const CodedCitation& record) {
  const std::size_t r = slot(record.code(rows));
  const std::size_t c = cols ? slot(record.code(*cols)) : 0;
  ++counts[r][c];
  ++n;
}

void FrequencyTable::merge(const FrequencyTable& other) {
  if (other.rows != rows || other.cols != cols) throw std::invalid_argument("frequency tables differ in shape");
  for (std::size_t r = 0; r < counts.size(); ++r) {
    for (std::size_t c = 0; c < counts[r].size(); ++c) counts[r][c] += other.counts[r][c];
  }
  n += other.n;
}

long FrequencyTable::row_total(std::size_t r) const {
  long total = 0;
  for (long v : counts[r]) total += v;
  return total;
}

std::string FrequencyTable::to_csv() const {
  std::ostringstream out;
  out << letter(rows);
  if (cols) out << '/' << letter(*cols);
  for (const auto& l : col_labels) out << ',' << l;
  out << '\n';
  for (std::size_t r = 0; r < row_labels.size(); ++r) {
    out << row_labels[r];
    for (long v : counts[r]) out << ',' << v;
    out << '\n';
  }
  return out.str();
}

FrequencyTable aggregate(std::span<const CodedCitation> records, Category rows, std::optional<Category> cols) {
  FrequencyTable t(rows, cols);
  for (const auto& r : records) t.add(r);
  return t;
}

// ---------------------------------------------------------------------------
// Agreement

namespace {

void check_lengths(std::span<const std::string> a, std::span<const std::string> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorKind::length_mismatch,
                "codings have " + std::to_string(a.size()) + " and " + std::to_string(b.size()) + " items");
  }
  if (a.empty()) throw Error(ErrorKind::no_overlap, "no items to compare");
}

constexpr double kDegenerateEps = 1e-12;

}  // namespace

double percent_agreement(std::span<const std::string> a, std::span<const std::string> b) {
  check_lengths(a, b);
  std::size_t same = 0;
  for (std::size_t i = 0; i < a.size(); ++i) same += a[i] == b[i] ? 1 : 0;
  return static_cast<double>(same) / static_cast<double>(a.size());
}

double cohens_kappa(std::span<const std::string> a, std::span<const std::string> b) {
  const double po = percent_agreement(a, b);
  std::map<std::string, std::pair<long, long>> marginals;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ++marginals[a[i]].first;
    ++marginals[b[i]].second;
  }
  const double n = static_cast<double>(a.size());
  double pe = 0.0;
  for (const auto& [label, m] : marginals) pe += (m.first / n) * (m.second / n);
  if (std::abs(1.0 - pe) < kDegenerateEps) return std::abs(1.0 - po) < kDegenerateEps ? 1.0 : 0.0;
  return (po - pe) / (1.0 - pe);
}

AgreementReport agreement(Category category, std::span<const std::string> a, std::span<const std::string> b) {
  AgreementReport r;
  r.category = category;
  r.percent_agreement = percent_agreement(a, b);
  r.cohens_kappa = cohens_kappa(a, b);
  r.n = static_cast<long>(a.size());
  r.labels = labels(category);
  const auto index = [&](const std::string& l) {
    const auto it = std::find(r.labels.begin(), r.labels.end(), l);
    if (it == r.labels.end()) throw Error(ErrorKind::malformed_input, "label '" + l + "' is not a value of this category");
    return static_cast<std::size_t>(it - r.labels.begin());
  };
  r.confusion.assign(r.labels.size(), std::vector<long>(r.labels.size(), 0));
  for (std::size_t i = 0; i < a.size(); ++i) ++r.confusion[index(a[i])][index(b[i])];
  return r;
}

std::vector<GoldItem> read_gold_jsonl(std::string_view input) {
  std::vector<GoldItem> out;
  for_each_json_line(input, [&](const nlohmann::json& j, std::size_t line) {
    GoldItem g;
    g.doc_id = j.at("doc_id").get<std::string>();
    g.citation_id = j.at("citation_id").get<int>();
    const auto take = [&](const nlohmann::json& obj) {
      for (const auto& [key, value] : obj.items()) {
        const auto c = parse_category(key);
        if (!c || !value.is_string()) continue;
        label_value(*c, value.get<std::string>(), line);
        g.labels[static_cast<std::size_t>(*c)] = value.get<std::string>();
      }
    };
    take(j);
    if (j.contains("codes")) take(j.at("codes"));
    out.push_back(std::move(g));
  });
  return out;
}

EvalResult evaluate(std::span<const CodedCitation> coded, std::span<const GoldItem> gold,
                    std::span<const Category> categories) {
  std::map<std::pair<std::string, int>, const CodedCitation*> index;
  for (const auto& r : coded) index.emplace(std::make_pair(r.doc_id, r.citation_id), &r);
  EvalResult result;
  std::vector<std::pair<const CodedCitation*, const GoldItem*>> aligned;
  for (const auto& g : gold) {
    const auto it = index.find({g.doc_id, g.citation_id});
    if (it == index.end()) {
      result.unmatched_gold.push_back(g.doc_id + "#" + std::to_string(g.citation_id));
    } else {
      aligned.emplace_back(it->second, &g);
    }
  }
  result.matched = static_cast<long>(aligned.size());
  if (aligned.empty()) throw Error(ErrorKind::no_overlap, "no gold item matches a coded citation");
  for (const Category c : categories) {
    std::vector<std::string> a;
    std::vector<std::string> b;
    for (const auto& [rec, g] : aligned) {
      const auto& l = g->labels[static_cast<std::size_t>(c)];
      if (!l) continue;
      a.push_back(rec->code(c).label());
      b.push_back(*l);
    }
    if (!a.empty()) result.reports.push_back(agreement(c, a, b));
  }
  return result;
}

std::string agreement_csv(std::span<const AgreementReport> reports) {
  std::ostringstream out;
  out << "category,n,percent_agreement,cohens_kappa\n";
  char buf[64];
  for (const auto& r : reports) {
    std::snprintf(buf, sizeof buf, "%.6f,%.6f", r.percent_agreement, r.cohens_kappa);
    out << letter(r.category) << ',' << r.n << ',' << buf << '\n';
  }
  return out.str();
}

}  // namespace cca
