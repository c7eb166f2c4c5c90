#include "hamlat/json_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace hamlat {

Json to_json(const HElement& x) { return Json{{"n", x.size()}, {"bits", x.to_string()}}; }

HElement helement_from_json(const Json& j) {
  if (j.is_string()) return HElement::from_string(j.get<std::string>());
  if (!j.is_object() || !j.contains("bits") || !j["bits"].is_string()) {
    throw std::invalid_argument("element must be {\"n\": ..., \"bits\": \"...\"}");
  }
  auto x = HElement::from_string(j["bits"].get<std::string>());
  if (j.contains("n") && j["n"] != x.size()) {
    throw std::invalid_argument("element \"n\" = " + j["n"].dump() + " but bits have length " +
                                std::to_string(x.size()));
  }
  return x;
}

HElement parse_helement(std::string_view text) {
  if (!text.empty() && text.front() == '{') return helement_from_json(parse_json(text, "element"));
  return HElement::from_string(text);
}

Json to_json(const Rank& r) { return r.to_string(); }

Json to_json(const ChainSpace& c) {
  Json embeddings = Json::array();
  for (const auto& e : c.embeddings()) embeddings.push_back(e.blocks());
  return Json{{"sizes", c.sizes()}, {"embeddings", std::move(embeddings)}, {"complete", c.complete()}};
}

namespace {

std::vector<std::size_t> size_list(const Json& j, const char* what) {
  if (!j.is_array()) throw std::invalid_argument(std::string(what) + " must be an array");
  std::vector<std::size_t> out;
  for (const auto& v : j) {
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
      throw std::invalid_argument(std::string(what) + " must hold non-negative integers");
    }
    out.push_back(v.get<std::size_t>());
  }
  return out;
}

}  // namespace

ChainFile chain_file_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("sizes")) throw std::invalid_argument("chain needs a \"sizes\" array");
  ChainFile out;
  out.sizes = size_list(j["sizes"], "sizes");
  if (j.contains("complete")) {
    if (!j["complete"].is_boolean()) throw std::invalid_argument("\"complete\" must be a boolean");
    out.complete = j["complete"].get<bool>();
  }
  const auto& sizes = out.sizes;
  const bool implicit = !j.contains("embeddings") || j["embeddings"].is_null();
  if (!implicit && !j["embeddings"].is_array()) throw std::invalid_argument("\"embeddings\" must be an array");
  const std::size_t steps = sizes.empty() ? 0 : sizes.size() - 1;
  if (!implicit && j["embeddings"].size() != steps) {
    throw std::invalid_argument("expected " + std::to_string(steps) + " embeddings, got " +
                                std::to_string(j["embeddings"].size()));
  }
  for (std::size_t k = 0; k < steps; ++k) {
    if (implicit || j["embeddings"][k].is_null()) {
      // Left for check_chain to report.
      if (sizes[k] == 0 || sizes[k + 1] == 0 || sizes[k + 1] % sizes[k] != 0) continue;
      out.embeddings.push_back(Embedding::canonical(sizes[k], sizes[k + 1]));
      continue;
    }
    const auto& emb = j["embeddings"][k];
    if (!emb.is_array()) throw std::invalid_argument("each embedding must be an array of blocks");
    std::vector<std::vector<std::size_t>> blocks;
    for (const auto& b : emb) blocks.push_back(size_list(b, "block"));
    out.embeddings.emplace_back(sizes[k], sizes[k + 1], std::move(blocks));
  }
  return out;
}

ChainSpace chain_from_json(const Json& j) {
  auto file = chain_file_from_json(j);
  return ChainSpace(std::move(file.sizes), std::move(file.embeddings), file.complete);
}

AnyField field_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("field") || !j["field"].is_string()) {
    throw std::invalid_argument("matrix needs a \"field\" string");
  }
  return parse_field(j["field"].get<std::string>());
}

Json to_json(const Theorem3Report& r) {
  return Json{{"level", r.level},
              {"mode", r.exhaustive ? "exhaustive" : "sampled"},
              {"checked", r.checked},
              {"tallies", {{"in_span", r.in_span}, {"moves_at_k", r.moves_at_k},
                           {"normalizes_then_moves", r.normalizes_then_moves}}},
              {"zero_violations", r.zero_violations()},
              {"violations", r.violations}};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Json parse_json(std::string_view text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw std::invalid_argument("malformed JSON in " + source + ": " + e.what());
  }
}

}  // namespace hamlat
