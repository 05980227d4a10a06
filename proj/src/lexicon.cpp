// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The procalign Authors

#include "procalign/lexicon.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <unordered_map>

namespace procalign {
namespace {

bool is_blank(char c) { return c == ' ' || c == '\t' || c == '\r'; }

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && is_blank(line[i])) ++i;
    const std::size_t start = i;
    while (i < line.size() && !is_blank(line[i])) ++i;
    if (i > start) fields.push_back(line.substr(start, i - start));
  }
  return fields;
}

template <typename Projection>
PairLexicon project(const TripleLexicon& triples, std::string tgt_id, Projection proj) {
  PairLexicon out{triples.pivot_id, std::move(tgt_id), {}, true};
  out.pairs.reserve(triples.size());
  for (const auto& t : triples.triples) out.pairs.push_back(proj(t));
  deduplicate(out);
  return out;
}

}  // namespace

std::vector<std::size_t> PairLexicon::src_indices() const {
  std::vector<std::size_t> out;
  out.reserve(pairs.size());
  for (const auto& p : pairs) out.push_back(p.src);
  return out;
}

std::vector<std::size_t> PairLexicon::tgt_indices() const {
  std::vector<std::size_t> out;
  out.reserve(pairs.size());
  for (const auto& p : pairs) out.push_back(p.tgt);
  return out;
}

void deduplicate(PairLexicon& lexicon) {
  std::set<IndexPair> seen;
  std::erase_if(lexicon.pairs, [&](const IndexPair& p) { return !seen.insert(p).second; });
  lexicon.unique = true;
}

DictionaryParse parse_dictionary(std::istream& in, const EmbeddingSpace& src,
                                 const EmbeddingSpace& tgt) {
  DictionaryParse result;
  result.lexicon.src_id = src.lang();
  result.lexicon.tgt_id = tgt.lang();

  std::unordered_map<std::string, bool> source_types;  // type -> any pair kept
  std::set<IndexPair> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto fields = split_fields(line);
    if (fields.empty()) continue;
    if (fields.size() != 2) {
      throw FormatError("dictionary: line " + std::to_string(line_no) + " has " +
                        std::to_string(fields.size()) + " fields, expected 2");
    }
    ++result.total_lines;
    auto [type_it, inserted] = source_types.try_emplace(std::string(fields[0]), false);
    const auto s = src.lookup(fields[0]);
    const auto t = tgt.lookup(fields[1]);
    if (!s || !t) {
      ++result.oov_lines;
      continue;
    }
    type_it->second = true;
    const IndexPair pair{*s, *t};
    if (seen.insert(pair).second) result.lexicon.pairs.push_back(pair);
  }

  result.total_source_types = source_types.size();
  result.kept_source_types = static_cast<std::size_t>(
      std::count_if(source_types.begin(), source_types.end(),
                    [](const auto& kv) { return kv.second; }));
  if (result.lexicon.empty()) throw EmptyLexiconError("dictionary: no in-vocabulary pair");
  return result;
}

DictionaryParse parse_dictionary_file(const std::filesystem::path& path,
                                      const EmbeddingSpace& src, const EmbeddingSpace& tgt) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open dictionary " + path.string());
  return parse_dictionary(in, src, tgt);
}

void write_dictionary(std::ostream& out, const PairLexicon& lexicon, const EmbeddingSpace& src,
                      const EmbeddingSpace& tgt) {
  for (const auto& p : lexicon.pairs) out << src.word(p.src) << ' ' << tgt.word(p.tgt) << '\n';
}

bool is_numeral(std::string_view token) {
  return !token.empty() &&
         std::all_of(token.begin(), token.end(), [](char c) { return c >= '0' && c <= '9'; });
}

PairLexicon seed_identical(const EmbeddingSpace& src, const EmbeddingSpace& tgt) {
  PairLexicon out{src.lang(), tgt.lang(), {}, true};
  for (std::size_t i = 0; i < src.size(); ++i) {
    if (auto j = tgt.lookup(src.word(i))) out.pairs.push_back({i, *j});
  }
  if (out.empty()) throw EmptyLexiconError("empty seed: no identically spelled tokens");
  return out;
}

PairLexicon seed_numerals(const EmbeddingSpace& src, const EmbeddingSpace& tgt) {
  PairLexicon out{src.lang(), tgt.lang(), {}, true};
  for (std::size_t i = 0; i < src.size(); ++i) {
    if (!is_numeral(src.word(i))) continue;
    if (auto j = tgt.lookup(src.word(i))) out.pairs.push_back({i, *j});
  }
  if (out.empty()) throw EmptyLexiconError("empty seed: no shared numerals");
  return out;
}

TripleLexicon triangulate(const PairLexicon& pivot_l2, const PairLexicon& pivot_l3) {
  if (pivot_l2.src_id != pivot_l3.src_id) {
    throw ShapeError("triangulate: pivot spaces differ ('" + pivot_l2.src_id + "' vs '" +
                     pivot_l3.src_id + "')");
  }
  TripleLexicon out{pivot_l2.src_id, pivot_l2.tgt_id, pivot_l3.tgt_id, {}};

  // Translations per pivot, in first-appearance order, without repeats.
  std::map<std::size_t, std::vector<std::size_t>> l3_of;
  std::set<IndexPair> seen3;
  for (const auto& p : pivot_l3.pairs) {
    if (seen3.insert(p).second) l3_of[p.src].push_back(p.tgt);
  }
  std::map<std::size_t, std::vector<std::size_t>> l2_of;
  std::set<IndexPair> seen2;
  for (const auto& p : pivot_l2.pairs) {
    if (seen2.insert(p).second) l2_of[p.src].push_back(p.tgt);
  }

  for (const auto& [pivot, l2s] : l2_of) {
    auto it = l3_of.find(pivot);
    if (it == l3_of.end()) continue;
    for (std::size_t n : l2s) {
      for (std::size_t l : it->second) out.triples.push_back({pivot, n, l});
    }
  }
  return out;
}

PairLexicon project_pivot_l2(const TripleLexicon& triples) {
  return project(triples, triples.l2_id,
                 [](const IndexTriple& t) { return IndexPair{t.pivot, t.l2}; });
}

PairLexicon project_pivot_l3(const TripleLexicon& triples) {
  return project(triples, triples.l3_id,
                 [](const IndexTriple& t) { return IndexPair{t.pivot, t.l3}; });
}

}  // namespace procalign
