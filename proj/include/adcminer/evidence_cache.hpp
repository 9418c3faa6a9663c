#pragma once

#include <array>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "adcminer/error.hpp"
#include "adcminer/evidence.hpp"

namespace adcminer {

// Binary layout, all integers little-endian:
//   magic "ADCEVI\0\1" (8 bytes), u32 version,
//   u64 predicate count, u64 distinct count, u64 tuple count,
//   distinct × { ceil(|P|/8) bitset bytes, u64 multiplicity },
//   u64 triple count, triples × { u32 set index, u32 tuple id, u32 count }.
// The triple section is empty when vios was not built.
inline constexpr std::array<char, 8> kEvidenceMagic = {'A', 'D', 'C', 'E', 'V', 'I', '\0', '\1'};
inline constexpr std::uint32_t kEvidenceCacheVersion = 1;

namespace detail {

template <typename T>
void put_le(std::ostream& out, T v) {
  for (std::size_t i = 0; i < sizeof(T); ++i) out.put(static_cast<char>((static_cast<std::uint64_t>(v) >> (8 * i)) & 0xFF));
}

template <typename T>
T get_le(std::istream& in) {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    const int c = in.get();
    if (c == std::char_traits<char>::eof()) throw DataError("evidence cache truncated");
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(c)) << (8 * i);
  }
  return static_cast<T>(v);
}

}  // namespace detail

inline void write_evidence(std::ostream& out, const Evidence& ev) {
  const auto& e = ev.set;
  out.write(kEvidenceMagic.data(), kEvidenceMagic.size());
  detail::put_le<std::uint32_t>(out, kEvidenceCacheVersion);
  detail::put_le<std::uint64_t>(out, e.predicate_count());
  detail::put_le<std::uint64_t>(out, e.distinct_count());
  detail::put_le<std::uint64_t>(out, e.tuple_count());
  const std::size_t nbytes = (e.predicate_count() + 7) / 8;
  for (std::size_t i = 0; i < e.distinct_count(); ++i) {
    const auto& words = e.set(i).words();
    for (std::size_t b = 0; b < nbytes; ++b)
      out.put(static_cast<char>((words[b / 8] >> (8 * (b % 8))) & 0xFF));
    detail::put_le<std::uint64_t>(out, e.multiplicity(i));
  }
  std::uint64_t triples = 0;
  for (const auto& list : ev.vios.all()) triples += list.size();
  detail::put_le<std::uint64_t>(out, triples);
  for (std::size_t s = 0; s < ev.vios.set_count(); ++s) {
    for (const auto& inc : ev.vios.incidences(s)) {
      detail::put_le<std::uint32_t>(out, static_cast<std::uint32_t>(s));
      detail::put_le<std::uint32_t>(out, inc.tuple);
      detail::put_le<std::uint32_t>(out, inc.count);
    }
  }
  if (!out) throw DataError("failed writing evidence cache");
}

inline Evidence read_evidence(std::istream& in) {
  std::array<char, 8> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kEvidenceMagic) throw DataError("not an evidence cache file (bad magic)");
  const auto version = detail::get_le<std::uint32_t>(in);
  if (version != kEvidenceCacheVersion) throw DataError("unsupported evidence cache version " + std::to_string(version));
  const auto width = detail::get_le<std::uint64_t>(in);
  const auto distinct = detail::get_le<std::uint64_t>(in);
  const auto tuples = detail::get_le<std::uint64_t>(in);
  const std::size_t nbytes = (width + 7) / 8;
  std::vector<PredicateBitset> sets;
  std::vector<std::uint64_t> mults;
  sets.reserve(distinct);
  mults.reserve(distinct);
  for (std::uint64_t i = 0; i < distinct; ++i) {
    PredicateBitset b(width);
    for (std::size_t k = 0; k < nbytes; ++k) {
      const auto byte = detail::get_le<std::uint8_t>(in);
      b.words()[k / 8] |= static_cast<std::uint64_t>(byte) << (8 * (k % 8));
    }
    sets.push_back(std::move(b));
    mults.push_back(detail::get_le<std::uint64_t>(in));
  }
  const auto triples = detail::get_le<std::uint64_t>(in);
  Evidence ev;
  if (triples > 0) {
    std::vector<std::vector<TupleIncidence>> per_set(distinct);
    for (std::uint64_t i = 0; i < triples; ++i) {
      const auto s = detail::get_le<std::uint32_t>(in);
      const auto t = detail::get_le<std::uint32_t>(in);
      const auto c = detail::get_le<std::uint32_t>(in);
      if (s >= distinct || t >= tuples) throw DataError("evidence cache: vios triple out of range");
      per_set[s].push_back(TupleIncidence{t, c});
    }
    ev.vios = Vios(std::move(per_set));
  }
  ev.set = EvidenceSet(width, tuples, std::move(sets), std::move(mults));
  return ev;
}

inline void save_evidence(const std::string& path, const Evidence& ev) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot open evidence cache for writing: " + path);
  write_evidence(out, ev);
}

inline Evidence load_evidence(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open evidence cache: " + path);
  return read_evidence(in);
}

}  // namespace adcminer
