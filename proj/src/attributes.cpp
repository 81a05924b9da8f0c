// Copyright 2026 The graphsom Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Attribute files and per-cluster summaries.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <set>
#include <unordered_map>

#include <fmt/format.h>

#include "documents.hpp"
#include "graphsom/error.hpp"
#include "graphsom/pipeline.hpp"

namespace graphsom {

namespace {

std::vector<std::string> split_tabs(std::string_view line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  for (;;) {
    const auto tab = line.find('\t', start);
    fields.emplace_back(line.substr(start, tab == std::string_view::npos ? tab : tab - start));
    if (tab == std::string_view::npos) break;
    start = tab + 1;
  }
  return fields;
}

std::optional<double> parse_number(std::string_view text) {
  double value = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value)) return std::nullopt;
  return value;
}

}  // namespace

AttributeTable AttributeTable::parse(std::istream& in) {
  AttributeTable table;
  std::map<std::string, AttributeKind> kinds;
  std::set<std::pair<std::string, std::string>> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;

    const auto fields = split_tabs(line);
    if (fields.front() == "@schema") {
      if (!table.records_.empty()) throw ParseError("@schema must precede all records", line_no);
      for (std::size_t f = 1; f < fields.size(); ++f) {
        const auto eq = fields[f].find('=');
        if (eq == std::string::npos || eq == 0) {
          throw ParseError(fmt::format("schema entry '{}' is not key=kind", fields[f]), line_no);
        }
        const std::string key = fields[f].substr(0, eq);
        const std::string kind = fields[f].substr(eq + 1);
        AttributeKind k;
        if (kind == "numeric") {
          k = AttributeKind::numeric;
        } else if (kind == "categorical") {
          k = AttributeKind::categorical;
        } else {
          throw ParseError(fmt::format("unknown attribute kind '{}'", kind), line_no);
        }
        if (!kinds.emplace(key, k).second) {
          throw ParseError(fmt::format("key '{}' declared twice", key), line_no);
        }
        table.keys_.emplace_back(key, k);
      }
      continue;
    }

    if (fields.size() != 3) {
      throw ParseError(fmt::format("expected 3 tab-separated fields, found {}", fields.size()),
                       line_no);
    }
    Record r{fields[0], fields[1], fields[2], 0.0};
    if (r.vertex.empty() || r.key.empty()) throw ParseError("empty vertex or key", line_no);
    if (r.value.empty()) throw ParseError("empty value", line_no);
    if (!seen.emplace(r.vertex, r.key).second) {
      throw ParseError(fmt::format("vertex '{}' has key '{}' twice", r.vertex, r.key), line_no);
    }
    auto it = kinds.find(r.key);
    if (it == kinds.end()) {
      it = kinds.emplace(r.key, AttributeKind::categorical).first;
      table.keys_.emplace_back(r.key, AttributeKind::categorical);
    }
    if (it->second == AttributeKind::numeric) {
      const auto number = parse_number(r.value);
      if (!number) {
        throw ParseError(fmt::format("value '{}' of numeric key '{}' is not a finite number",
                                     r.value, r.key),
                         line_no);
      }
      r.number = *number;
    }
    table.records_.push_back(std::move(r));
  }
  if (in.bad()) throw IoError("read failure while loading attributes");
  return table;
}

AttributeTable AttributeTable::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot open '{}'", path.string()));
  return parse(in);
}

std::vector<ClusterAttributeSummary> summarize_attributes(const std::vector<std::string>& labels,
                                                          const Partition& partition,
                                                          const AttributeTable& table) {
  if (labels.size() != partition.size()) {
    throw ValidationError("label count differs from the partition size");
  }
  if (table.records().empty()) throw ValidationError("attribute file has no records");
  std::unordered_map<std::string, Index> index;
  for (Index v = 0; v < labels.size(); ++v) index.emplace(labels[v], v);

  const Index k = partition.cluster_count();
  const std::size_t nkeys = table.keys().size();
  std::map<std::string, std::size_t> key_slot;
  for (std::size_t s = 0; s < nkeys; ++s) key_slot.emplace(table.keys()[s].first, s);

  // Values per (cluster, key), in file order.
  std::vector<std::vector<std::vector<const AttributeTable::Record*>>> values(
      k, std::vector<std::vector<const AttributeTable::Record*>>(nkeys));
  for (const auto& r : table.records()) {
    const auto v = index.find(r.vertex);
    if (v == index.end()) {
      throw ValidationError(fmt::format("attribute vertex '{}' is not in the partition", r.vertex));
    }
    values[partition.cluster_of(v->second)][key_slot.at(r.key)].push_back(&r);
  }

  const auto sizes = partition.cluster_sizes();
  std::vector<ClusterAttributeSummary> out;
  for (Index c = 0; c < k; ++c) {
    ClusterAttributeSummary s;
    s.cluster = c;
    s.size = sizes[c];
    for (std::size_t slot = 0; slot < nkeys; ++slot) {
      const auto& [key, kind] = table.keys()[slot];
      const auto& vals = values[c][slot];
      const Index present = vals.size();
      if (kind == AttributeKind::numeric) {
        NumericSummary ns{present, s.size - present, std::nullopt, std::nullopt};
        if (present > 0) {
          double sum = 0.0;
          for (const auto* r : vals) sum += r->number;
          const double mean = sum / static_cast<double>(present);
          double ss = 0.0;
          for (const auto* r : vals) ss += (r->number - mean) * (r->number - mean);
          ns.mean = mean;
          ns.stddev = std::sqrt(ss / static_cast<double>(present));
        }
        s.numeric.emplace_back(key, ns);
      } else {
        CategoricalSummary cs{present, s.size - present, {}};
        std::map<std::string, Index> counts;
        for (const auto* r : vals) ++counts[r->value];
        cs.counts.assign(counts.begin(), counts.end());
        std::stable_sort(cs.counts.begin(), cs.counts.end(),
                         [](const auto& a, const auto& b) { return a.second > b.second; });
        s.categorical.emplace_back(key, std::move(cs));
      }
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::string attribute_summary_document(const std::vector<ClusterAttributeSummary>& summary,
                                       const AttributeTable& table) {
  using detail::Json;
  Json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["kind"] = "attribute-summary";
  Json keys = Json::array();
  for (const auto& [key, kind] : table.keys()) {
    keys.push_back({{"name", key}, {"kind", kind == AttributeKind::numeric ? "numeric" : "categorical"}});
  }
  doc["keys"] = std::move(keys);
  Json clusters = Json::array();
  for (const auto& s : summary) {
    Json c;
    c["cluster"] = s.cluster;
    c["size"] = s.size;
    Json numeric = Json::object();
    for (const auto& [key, ns] : s.numeric) {
      numeric[key] = {{"present", ns.present},
                      {"missing", ns.missing},
                      {"mean", ns.mean ? Json(*ns.mean) : Json(nullptr)},
                      {"std", ns.stddev ? Json(*ns.stddev) : Json(nullptr)}};
    }
    Json categorical = Json::object();
    for (const auto& [key, cs] : s.categorical) {
      Json dist = Json::array();
      for (const auto& [value, count] : cs.counts) {
        dist.push_back({{"value", value},
                        {"count", count},
                        {"fraction", static_cast<double>(count) / static_cast<double>(cs.present)}});
      }
      categorical[key] = {{"present", cs.present}, {"missing", cs.missing}, {"distribution", dist}};
    }
    c["numeric"] = std::move(numeric);
    c["categorical"] = std::move(categorical);
    clusters.push_back(std::move(c));
  }
  doc["clusters"] = std::move(clusters);
  return detail::dump(doc);
}

void run_attribute_summary(const std::filesystem::path& partition,
                           const std::filesystem::path& attributes,
                           const std::filesystem::path& out) {
  const PartitionDocument doc = read_partition_document(partition);
  const AttributeTable table = AttributeTable::load(attributes);
  const auto summary = summarize_attributes(doc.labels, doc.partition, table);
  write_text_file(out, attribute_summary_document(summary, table));
}

}  // namespace graphsom
