#include "store_detail.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <vector>

#include <nlohmann/json.hpp>

#include "girr/errors.hpp"

namespace girr::scan {

namespace detail {

namespace {

std::uint64_t parse_hex64(const std::string& s) {
  if (s.empty() || s.size() > 16) throw StoreError("malformed checksum field");
  std::uint64_t v = 0;
  for (char c : s) {
    v <<= 4;
    if (c >= '0' && c <= '9') {
      v |= static_cast<std::uint64_t>(c - '0');
    } else if (c >= 'a' && c <= 'f') {
      v |= static_cast<std::uint64_t>(c - 'a' + 10);
    } else {
      throw StoreError("malformed checksum field");
    }
  }
  return v;
}

std::string to_hex64(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i) {
    s[static_cast<std::size_t>(i)] = digits[v & 0xf];
    v >>= 4;
  }
  return s;
}

}  // namespace

std::string header_line(const Header& h) {
  nlohmann::ordered_json j;
  j["format"] = "girr-scan";
  j["version"] = 1;
  j["x_max"] = h.x_max;
  j["kinds"] = h.kinds;
  j["d"] = h.d;
  j["a"] = h.a;
  j["chunk_size"] = h.chunk_size;
  j["schoolbook_threshold"] = h.schoolbook_threshold;
  j["chunks_total"] = h.chunks_total;
  return j.dump();
}

Header parse_header(const std::string& line) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception&) {
    throw StoreError("journal header is not valid JSON");
  }
  if (!j.is_object() || j.value("format", "") != "girr-scan") {
    throw StoreError("not a scan journal (missing format tag)");
  }
  if (j.value("version", 0) != 1) {
    throw StoreError("unsupported journal version");
  }
  try {
    Header h;
    h.x_max = j.at("x_max").get<std::uint64_t>();
    h.kinds = j.at("kinds").get<std::string>();
    h.d = j.at("d").get<std::uint64_t>();
    h.a = j.at("a").get<std::uint64_t>();
    h.chunk_size = j.at("chunk_size").get<std::uint64_t>();
    h.schoolbook_threshold = j.at("schoolbook_threshold").get<std::uint64_t>();
    h.chunks_total = j.at("chunks_total").get<std::uint64_t>();
    return h;
  } catch (const nlohmann::json::exception&) {
    throw StoreError("journal header is missing fields");
  }
}

std::string marker_line(const Marker& m) {
  nlohmann::ordered_json j;
  j["chunk"] = m.chunk;
  j["p_lo"] = m.p_lo;
  j["p_hi"] = m.p_hi;
  j["records"] = m.records;
  j["fnv64"] = to_hex64(m.fnv);
  return j.dump();
}

bool looks_like_marker(const std::string& line) {
  return line.rfind("{\"chunk\":", 0) == 0;
}

Marker parse_marker(const std::string& line) {
  try {
    nlohmann::json j = nlohmann::json::parse(line);
    Marker m;
    m.chunk = j.at("chunk").get<std::uint64_t>();
    m.p_lo = j.at("p_lo").get<std::uint64_t>();
    m.p_hi = j.at("p_hi").get<std::uint64_t>();
    m.records = j.at("records").get<std::uint64_t>();
    m.fnv = parse_hex64(j.at("fnv64").get<std::string>());
    return m;
  } catch (const nlohmann::json::exception&) {
    throw StoreError("malformed chunk marker");
  }
}

JournalState walk_journal(const std::string& path,
                          const std::function<void(const std::string&)>* per_record) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw StoreError("cannot open journal: " + path);

  std::string line;
  if (!std::getline(in, line) || in.eof()) {
    throw StoreError("journal lacks a complete header: " + path);
  }
  JournalState st;
  st.header = parse_header(line);
  std::uint64_t offset = line.size() + 1;
  st.bytes = offset;

  std::uint64_t pending_records = 0;
  std::uint64_t pending_fnv = kFnvOffset;
  std::vector<std::string> pending_lines;

  while (std::getline(in, line)) {
    if (in.eof()) break;  // final line unterminated: uncommitted tail
    if (looks_like_marker(line)) {
      const Marker m = parse_marker(line);
      if (m.chunk != st.chunks_committed) {
        throw StoreError("journal chunk sequence broken at chunk " + std::to_string(m.chunk));
      }
      if (m.records != pending_records || m.fnv != pending_fnv || m.p_lo > m.p_hi) {
        throw StoreError("journal chunk " + std::to_string(m.chunk) +
                         " fails its checksum");
      }
      st.chunks_committed += 1;
      st.records += m.records;
      st.covered_through = m.p_hi;
      offset += line.size() + 1;
      st.bytes = offset;
      if (per_record) {
        for (const std::string& rl : pending_lines) (*per_record)(rl);
      }
      pending_records = 0;
      pending_fnv = kFnvOffset;
      pending_lines.clear();
    } else {
      pending_records += 1;
      pending_fnv = fnv_line(pending_fnv, line);
      if (per_record) pending_lines.push_back(line);
      offset += line.size() + 1;
    }
  }

  if (st.chunks_committed > st.header.chunks_total) {
    throw StoreError("journal holds more chunks than its plan");
  }
  st.has_tail = std::filesystem::file_size(path) > st.bytes;
  return st;
}

std::string index_path(const std::string& store_path) { return store_path + ".idx.json"; }

void write_index(const std::string& store_path, const IndexInfo& info) {
  nlohmann::ordered_json j;
  j["format"] = "girr-scan-index";
  j["chunks_committed"] = info.chunks_committed;
  j["records"] = info.records;
  j["covered_through"] = info.covered_through;
  j["bytes"] = info.bytes;
  j["complete"] = info.complete;
  const std::string tmp = index_path(store_path) + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw StoreError("cannot write index for " + store_path);
    out << j.dump() << '\n';
    out.flush();
    if (!out) throw StoreError("cannot write index for " + store_path);
  }
  std::filesystem::rename(tmp, index_path(store_path));
}

std::optional<IndexInfo> read_index(const std::string& store_path) {
  std::ifstream in(index_path(store_path), std::ios::binary);
  if (!in) return std::nullopt;
  std::string line;
  if (!std::getline(in, line)) return std::nullopt;
  try {
    nlohmann::json j = nlohmann::json::parse(line);
    if (j.value("format", "") != "girr-scan-index") return std::nullopt;
    IndexInfo info;
    info.chunks_committed = j.at("chunks_committed").get<std::uint64_t>();
    info.records = j.at("records").get<std::uint64_t>();
    info.covered_through = j.at("covered_through").get<std::uint64_t>();
    info.bytes = j.at("bytes").get<std::uint64_t>();
    info.complete = j.at("complete").get<bool>();
    return info;
  } catch (const nlohmann::json::exception&) {
    return std::nullopt;
  }
}

KindSet kinds_from_header(const Header& h) { return parse_kinds(h.kinds); }

}  // namespace detail

namespace {

StoreInfo info_from_parts(const detail::Header& h, std::uint64_t chunks_committed,
                          std::uint64_t records, std::uint64_t covered_through) {
  StoreInfo info;
  info.x_max = h.x_max;
  info.kinds = detail::kinds_from_header(h);
  info.d = h.d;
  info.a = h.a;
  info.chunk_size = h.chunk_size;
  info.schoolbook_threshold = static_cast<std::size_t>(h.schoolbook_threshold);
  info.chunks_total = h.chunks_total;
  info.chunks_committed = chunks_committed;
  info.records = records;
  info.complete = chunks_committed == h.chunks_total;
  info.covered_through = info.complete ? h.x_max : covered_through;
  return info;
}

}  // namespace

StoreInfo inspect_store(const std::string& path) {
  // Fast path: a sidecar index that accounts for every byte of the journal.
  // Anything it cannot vouch for falls back to the checksummed walk; readers
  // that consume records (for_each_record) always re-verify.
  if (auto idx = detail::read_index(path)) {
    std::error_code ec;
    const auto size = std::filesystem::file_size(path, ec);
    if (!ec && size == idx->bytes) {
      std::ifstream in(path, std::ios::binary);
      std::string first;
      if (in && std::getline(in, first) && !in.eof()) {
        try {
          const detail::Header h = detail::parse_header(first);
          return info_from_parts(h, idx->chunks_committed, idx->records, idx->covered_through);
        } catch (const StoreError&) {
          // damaged header: fall through to the full walk for the real error
        }
      }
    }
  }
  const detail::JournalState st = detail::walk_journal(path, nullptr);
  return info_from_parts(st.header, st.chunks_committed, st.records, st.covered_through);
}

StoreInfo for_each_record(const std::string& path,
                          const std::function<void(const classify::PrimeRecord&)>& fn) {
  std::function<void(const std::string&)> sink = [&](const std::string& line) {
    classify::PrimeRecord rec;
    try {
      rec = classify::record_from_jsonl(line);
    } catch (const std::exception&) {
      throw StoreError("journal record is not parseable despite a valid checksum");
    }
    fn(rec);
  };
  const detail::JournalState st = detail::walk_journal(path, &sink);
  return info_from_parts(st.header, st.chunks_committed, st.records, st.covered_through);
}

}  // namespace girr::scan
