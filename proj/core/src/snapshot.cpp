/*
Copyright 2026 The rosie Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "rosie/store.hpp"

// Layout (little endian):
//   "ROSIEDB1" u64 term_count { u32 len, bytes }* u64 triple_count { u32 s,p,o }*

namespace rosie {

namespace {

constexpr char kMagic[8] = {'R', 'O', 'S', 'I', 'E', 'D', 'B', '1'};

template <class T>
void put(std::ostream& out, T v) {
  unsigned char buf[sizeof(T)];
  for (std::size_t i = 0; i < sizeof(T); ++i) buf[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(buf), sizeof(T));
}

template <class T>
T get(std::istream& in) {
  unsigned char buf[sizeof(T)];
  if (!in.read(reinterpret_cast<char*>(buf), sizeof(T))) throw SnapshotFormatError("truncated snapshot");
  T v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<T>(buf[i]) << (8 * i);
  return v;
}

}  // namespace

void snapshot_save(const Dataset& d, std::ostream& out) {
  out.write(kMagic, sizeof kMagic);
  const auto& dict = d.dictionary();
  put<std::uint64_t>(out, dict.size());
  for (std::size_t i = 0; i < dict.size(); ++i) {
    const std::string& t = dict.term(static_cast<TermId>(i));
    put<std::uint32_t>(out, static_cast<std::uint32_t>(t.size()));
    out.write(t.data(), static_cast<std::streamsize>(t.size()));
  }
  put<std::uint64_t>(out, d.size());
  for (const Triple& t : d.spo()) {
    put(out, t.s);
    put(out, t.p);
    put(out, t.o);
  }
  if (!out) throw IoError("write failure while saving snapshot");
}

Dataset snapshot_load(std::istream& in) {
  char magic[sizeof kMagic];
  if (!in.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof kMagic) != 0)
    throw SnapshotFormatError("bad snapshot magic");
  TermDictionary dict;
  auto terms = get<std::uint64_t>(in);
  std::string buf;
  for (std::uint64_t i = 0; i < terms; ++i) {
    auto len = get<std::uint32_t>(in);
    buf.resize(len);
    if (!in.read(buf.data(), len)) throw SnapshotFormatError("truncated term");
    if (dict.intern(buf) != i) throw SnapshotFormatError("duplicate term in dictionary");
  }
  auto n = get<std::uint64_t>(in);
  std::vector<Triple> triples;
  triples.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    Triple t{get<std::uint32_t>(in), get<std::uint32_t>(in), get<std::uint32_t>(in)};
    if (t.s >= terms || t.p >= terms || t.o >= terms) throw SnapshotFormatError("term id out of range");
    triples.push_back(t);
  }
  return Dataset(std::move(dict), std::move(triples));
}

void snapshot_save_file(const Dataset& d, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path);
  snapshot_save(d, out);
}

Dataset snapshot_load_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  return snapshot_load(in);
}

}  // namespace rosie
