#include "hamlat/cli.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <variant>

#include "CLI11.hpp"
#include "hamlat/cartan.hpp"
#include "hamlat/chains.hpp"
#include "hamlat/error.hpp"
#include "hamlat/json_io.hpp"
#include "hamlat/periodic.hpp"
#include "hamlat/steinitz.hpp"
#include "hamlat/tensor.hpp"

namespace hamlat::cli {
namespace {

struct Options {
  std::vector<std::string> inputs;
  std::string field = "gf2";
  std::string sizes;
  std::string primes;
  std::string left;
  std::string right;
  std::string embedding;
  std::size_t depth = 0;
  std::size_t trials = 1000;
  std::size_t level = 0;
  std::size_t workers = 1;
  std::uint64_t seed = 1;
  std::uint64_t budget = 100'000;
  bool exhaustive = false;
  bool json = false;
  bool complete = false;
  std::string out;
};

struct Result {
  Json json;
  bool ok = true;
  /// Replaces the generic rendering of `json` in human-readable mode.
  std::optional<std::string> text;
};

// Exit-2 errors that are not library exceptions.
struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

std::uint64_t parse_count(std::string_view s, const char* what) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw std::invalid_argument(std::string("malformed ") + what + " '" + std::string(s) + "'");
  }
  return v;
}

std::vector<std::uint64_t> parse_list(std::string_view text, const char* what) {
  std::vector<std::uint64_t> out;
  if (text.empty()) throw UsageError(std::string("missing ") + what);
  std::size_t start = 0;
  while (true) {
    const auto comma = text.find(',', start);
    out.push_back(parse_count(text.substr(start, comma - start), what));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::vector<std::size_t> parse_sizes(std::string_view text) {
  const auto raw = parse_list(text, "--sizes");
  return {raw.begin(), raw.end()};
}

const std::string& input(const Options& o, std::size_t i, const char* what) {
  if (o.inputs.size() <= i) throw UsageError(std::string("missing argument: ") + what);
  return o.inputs[i];
}

void require_inputs(const Options& o, std::size_t count) {
  if (o.inputs.size() > count) throw UsageError("unexpected argument '" + o.inputs[count] + "'");
}

/// Inline JSON when the text starts with '{' or '[', a file path otherwise.
Json load_json(const std::string& arg) {
  if (!arg.empty() && (arg.front() == '{' || arg.front() == '[')) return parse_json(arg, "argument");
  return parse_json(read_file(arg), arg);
}

/// A chain file, inline JSON, or a comma-separated size list.
ChainFile load_chain_file(const std::string& arg, bool complete) {
  if (!arg.empty() && std::isdigit(static_cast<unsigned char>(arg.front())) && arg.find('.') == std::string::npos &&
      arg.find('/') == std::string::npos) {
    Json j{{"sizes", parse_sizes(arg)}, {"complete", complete}};
    return chain_file_from_json(j);
  }
  auto file = chain_file_from_json(load_json(arg));
  file.complete = file.complete || complete;
  return file;
}

ChainFile chain_arg(const Options& o) {
  if (!o.inputs.empty()) {
    require_inputs(o, 1);
    return load_chain_file(o.inputs[0], o.complete);
  }
  if (o.sizes.empty()) throw UsageError("give a chain file or --sizes");
  return load_chain_file(o.sizes, o.complete);
}

ChainSpace to_chain(ChainFile f) { return ChainSpace(std::move(f.sizes), std::move(f.embeddings), f.complete); }

Json diagnostics_json(const EmbeddingReport& r) {
  Json out = Json::array();
  for (const auto& d : r.diagnostics) out.push_back({{"code", d.code}, {"message", d.message}});
  return out;
}

std::vector<HElement> parse_members(const std::string& text) {
  std::vector<HElement> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = text.find(',', start);
    out.push_back(HElement::from_string(text.substr(start, comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

template <class Fn>
Result with_field(const Options& o, Fn&& fn) {
  return std::visit([&](const auto& field) { return fn(field); }, parse_field(o.field));
}

PrimeField finite_field(const Options& o) {
  const auto f = parse_field(o.field);
  if (!std::holds_alternative<PrimeField>(f)) throw UsageError("this command needs a finite field (gf<p>)");
  return std::get<PrimeField>(f);
}

// ---- steinitz

Result steinitz_binary(const Options& o, const std::string& name) {
  require_inputs(o, 2);
  const auto a = SteinitzNumber::parse(input(o, 0, "first Steinitz number"));
  const auto b = SteinitzNumber::parse(input(o, 1, "second Steinitz number"));
  Result r;
  if (name == "divides") {
    const bool d = divides(a, b);
    r.json = {{"a", a.to_string()}, {"b", b.to_string()}, {"divides", d}};
    r.text = d ? "true" : "false";
    return r;
  }
  const auto c = name == "mul" ? mul(a, b) : lcm(a, b);
  r.json = {{"a", a.to_string()}, {"b", b.to_string()}, {"result", c.to_string()}};
  r.text = c.to_string();
  return r;
}

Result steinitz_parse(const Options& o) {
  require_inputs(o, 1);
  const auto a = SteinitzNumber::parse(input(o, 0, "Steinitz number"));
  Json factors = Json::array();
  for (const auto& [p, e] : a.factors()) {
    factors.push_back({{"prime", p}, {"exponent", e.is_infinite() ? Json("inf") : Json(e.value())}});
  }
  Result r;
  r.json = {{"canonical", a.to_string()}, {"factors", std::move(factors)}, {"finite", a.is_finite()}};
  if (a.is_finite()) r.json["natural"] = a.to_natural().get_str();
  return r;
}

// ---- space

Result space_rank(const Options& o) {
  require_inputs(o, 1);
  const auto x = parse_helement(input(o, 0, "element"));
  Result r;
  r.json = {{"element", to_json(x)}, {"weight", x.weight()}, {"rank", to_json(rank(x))}};
  return r;
}

Result space_distance(const Options& o) {
  require_inputs(o, 2);
  const auto a = parse_helement(input(o, 0, "first element"));
  const auto b = parse_helement(input(o, 1, "second element"));
  Result r;
  r.json = {{"a", to_json(a)}, {"b", to_json(b)}, {"differing", (a + b).weight()}, {"distance", to_json(distance(a, b))}};
  return r;
}

Result space_axioms(const Options& o) {
  require_inputs(o, 1);
  const auto n = parse_count(input(o, 0, "space size"), "space size");
  const auto report = check_rank_axioms(StandardSpace(n), o.trials, o.seed);
  Json violations = Json::array();
  for (const auto& v : report.violations) violations.push_back({{"axiom", v.axiom}, {"detail", v.detail}});
  Result r;
  r.ok = report.ok();
  r.json = {{"n", report.n},
            {"exhaustive_elements", report.exhaustive_elements},
            {"exhaustive_pairs", report.exhaustive_pairs},
            {"elements_checked", report.elements_checked},
            {"pairs_checked", report.pairs_checked},
            {"violations", std::move(violations)},
            {"ok", report.ok()}};
  return r;
}

Result space_cover(const Options& o) {
  if (o.inputs.empty()) throw UsageError("missing argument: elements");
  std::vector<HElement> xs;
  for (const auto& s : o.inputs) xs.push_back(parse_helement(s));
  const auto cover = orthogonal_cover(xs);
  Json members = Json::array(), parts = Json::array();
  for (const auto& m : cover.members()) members.push_back(m.to_string());
  for (const auto& x : xs) parts.push_back(cover.members_below(x));
  Result r;
  r.json = {{"inputs", o.inputs}, {"cover", std::move(members)}, {"decompositions", std::move(parts)}};
  return r;
}

// ---- tensor

Result tensor_element_cmd(const Options& o) {
  require_inputs(o, 2);
  const auto a = parse_helement(input(o, 0, "left element"));
  const auto b = parse_helement(input(o, 1, "right element"));
  const auto t = tensor_element(a, b);
  Result r;
  r.json = {{"left", to_json(a)},
            {"right", to_json(b)},
            {"tensor", to_json(t)},
            {"rank", to_json(rank(t))},
            {"rank_product", to_json(Rank(rank(a).value() * rank(b).value()))}};
  r.ok = rank(t).value() == rank(a).value() * rank(b).value();
  return r;
}

std::pair<std::size_t, std::size_t> two_sizes(const Options& o) {
  const auto s = parse_sizes(o.sizes);
  if (s.size() != 2) throw UsageError("--sizes needs exactly two values n,m");
  return {s[0], s[1]};
}

Result tensor_iso_check(const Options& o) {
  require_inputs(o, 0);
  const auto [n, m] = two_sizes(o);
  const auto report = tensor_space_iso(n, m);
  Result r;
  r.ok = report.ok();
  r.json = {{"n", n},
            {"m", m},
            {"pure_tensors_checked", report.pure_tensors_checked},
            {"sums_checked", report.sums_checked},
            {"violations", report.violations},
            {"ok", report.ok()}};
  return r;
}

Result tensor_cover_rank(const Options& o) {
  require_inputs(o, 1);
  const auto x = parse_helement(input(o, 0, "element"));
  const auto [n, m] = two_sizes(o);
  if (n * m != x.size()) {
    throw std::invalid_argument("element has " + std::to_string(x.size()) + " bits, expected " + std::to_string(n * m));
  }
  const auto left = o.left.empty() ? OrthogonalCover::atoms(StandardSpace(n)) : OrthogonalCover(parse_members(o.left));
  const auto right =
      o.right.empty() ? OrthogonalCover::atoms(StandardSpace(m)) : OrthogonalCover(parse_members(o.right));
  if (left.space().size() != n || right.space().size() != m) throw std::invalid_argument("cover sizes disagree with --sizes");
  const auto via = rank_via_cover(x, left, right);
  const auto cmp = refine_and_compare(x, left, right, OrthogonalCover::atoms(StandardSpace(n)),
                                      OrthogonalCover::atoms(StandardSpace(m)));
  Result r;
  r.ok = via == rank(x) && cmp.agree();
  r.json = {{"element", to_json(x)},
            {"rank_via_cover", to_json(via)},
            {"rank_via_atoms", to_json(cmp.second)},
            {"rank_via_refinement", to_json(cmp.common)},
            {"direct_rank", to_json(rank(x))},
            {"agree", r.ok}};
  return r;
}

// ---- periodic

PeriodicSequence parse_periodic(const std::string& s) {
  const auto colon = s.find(':');
  if (colon == std::string::npos) return PeriodicSequence::from_string(s);
  if (colon != 0) throw std::invalid_argument("'" + s + "' has a preperiod; periodic sequences are written ':tail'");
  return PeriodicSequence::from_string(std::string_view(s).substr(1));
}

Result periodic_rank(const Options& o) {
  require_inputs(o, 1);
  const auto a = parse_periodic(input(o, 0, "sequence"));
  Result r;
  r.json = {{"sequence", a.to_string()}, {"period", a.period()}, {"rank", to_json(rank(a))}};
  return r;
}

Result periodic_pseudorank(const Options& o) {
  require_inputs(o, 1);
  const auto a = EventuallyPeriodicSequence::parse(input(o, 0, "sequence"));
  const auto pr = besicovitch_pseudorank(a);
  Result r;
  r.json = {{"sequence", a.to_string()}, {"pseudorank", to_json(pr)}, {"null", pr == Rank::zero()}};
  return r;
}

Result periodic_member(const Options& o) {
  require_inputs(o, 2);
  const auto a = parse_periodic(input(o, 0, "sequence"));
  const auto u = SteinitzNumber::parse(input(o, 1, "Steinitz number"));
  Result r;
  const bool member = is_u_periodic(a, u);
  r.json = {{"sequence", a.to_string()}, {"u", u.to_string()}, {"period", a.period()}, {"member", member}};
  r.text = member ? "true" : "false";
  return r;
}

// ---- chain

Result chain_validate(const Options& o) {
  const auto file = chain_arg(o);
  const auto report = check_chain(file.sizes, file.embeddings);
  Result r;
  r.ok = report.ok();
  r.json = {{"sizes", file.sizes}, {"valid", report.ok()}, {"diagnostics", diagnostics_json(report)}};
  return r;
}

Result chain_factor(const Options& o) {
  require_inputs(o, 0);
  const auto [n, s] = two_sizes(o);
  Embedding e = Embedding::canonical(n, s);
  if (!o.embedding.empty()) {
    const auto blocks = load_json(o.embedding);
    e = Embedding(n, s, blocks.get<std::vector<std::vector<std::size_t>>>());
  }
  const auto report = validate_embedding(e);
  Result r;
  if (!report.ok()) {
    r.ok = false;
    r.json = {{"n", n}, {"s", s}, {"valid", false}, {"diagnostics", diagnostics_json(report)}};
    return r;
  }
  const auto f = factor_complement(e);
  Json gens = Json::array();
  for (const auto& g : f.generators) gens.push_back(g.to_string());
  mpz_class elements;
  mpz_ui_pow_ui(elements.get_mpz_t(), 2, f.complement_atoms);
  r.ok = f.ok();
  r.json = {{"n", n},
            {"s", s},
            {"valid", true},
            {"generators", std::move(gens)},
            {"generator_rank", to_json(Rank(static_cast<std::int64_t>(n), static_cast<std::int64_t>(s)))},
            {"pairing", f.pairing},
            {"complement_atoms", f.complement_atoms},
            {"complement_elements", elements.get_str()},
            {"violations", f.violations},
            {"ok", f.ok()}};
  return r;
}

Json primes_json(const PrimeDecomposition& d) { return d.primes; }

std::string join(const std::vector<std::uint64_t>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + std::to_string(v[i]);
  return out;
}

Result chain_decompose(const Options& o) {
  const auto c = to_chain(chain_arg(o));
  const auto d = decompose_chain(c);
  Result r;
  r.json = {{"sizes", c.sizes()}, {"primes", primes_json(d)}, {"product", d.product().get_str()},
            {"st", d.steinitz().to_string()}};
  r.text = "primes " + join(d.primes) + "\nst " + d.steinitz().to_string();
  return r;
}

Result chain_st(const Options& o) {
  const auto c = to_chain(chain_arg(o));
  const auto st = steinitz_of_chain(c);
  Result r;
  r.json = {{"sizes", c.sizes()}, {"complete", c.complete()}, {"st", st.to_string()}};
  r.text = st.to_string();
  return r;
}

Result chain_iso(const Options& o) {
  require_inputs(o, 2);
  const auto a = to_chain(load_chain_file(input(o, 0, "first chain"), o.complete));
  const auto b = to_chain(load_chain_file(input(o, 1, "second chain"), o.complete));
  const auto res = iso_test(a, b);
  Result r;
  r.json = {{"verdict", to_string(res.verdict)},
            {"first", res.first.to_string()},
            {"second", res.second.to_string()},
            {"atom_bijection", res.atom_bijection}};
  r.text = to_string(res.verdict) + " (" + res.first.to_string() + " vs " + res.second.to_string() + ")";
  return r;
}

// ---- cartan

template <ExactField F>
std::vector<Matrix<F>> frame_arg(const F& field, const Json& j) {
  return matrices_from_json(field, j);
}

Result cartan_check(const Options& o) {
  require_inputs(o, 1);
  const auto j = load_json(input(o, 0, "frame file"));
  if (!j.is_array() || j.empty()) throw std::invalid_argument("frame must be a non-empty array of matrices");
  const auto field = field_from_json(j.front());
  return std::visit(
      [&](const auto& f) {
        const auto frame = frame_arg(f, j);
        const auto check = is_cartan<std::decay_t<decltype(f)>>(frame);
        Result r;
        r.ok = check.ok();
        r.json = {{"field", f.name()},
                  {"n", frame.front().n()},
                  {"count", frame.size()},
                  {"is_cartan", check.ok()},
                  {"diagnostics", check.diagnostics}};
        return r;
      },
      field);
}

Result cartan_conjugate(const Options& o) {
  require_inputs(o, 2);
  const auto a = load_json(input(o, 0, "first frame"));
  const auto b = load_json(input(o, 1, "second frame"));
  if (!a.is_array() || a.empty()) throw std::invalid_argument("frame must be a non-empty array of matrices");
  return std::visit(
      [&](const auto& f) {
        using F = std::decay_t<decltype(f)>;
        const CartanFrame<F> h1(frame_arg(f, a));
        const CartanFrame<F> h2(frame_arg(f, b));
        const auto x = conjugate_cartans(h1, h2);
        Result r;
        r.json = {{"field", f.name()}, {"n", h1.n()}, {"x", to_json(x)}, {"verified", true}};
        return r;
      },
      field_from_json(a.front()));
}

Result cartan_count(const Options& o) {
  require_inputs(o, 1);
  const auto m = parse_count(input(o, 0, "dimension"), "dimension");
  const auto field = finite_field(o);
  const auto c = count_cartans(m, field);
  Result r;
  r.ok = c.ok();
  r.json = {{"m", c.m},
            {"q", c.q},
            {"rank_one_idempotents", c.rank_one_idempotents},
            {"enumerated", c.enumerated},
            {"formula", c.formula.get_str()},
            {"agree", c.ok()}};
  return r;
}

Result cartan_build_chain(const Options& o) {
  require_inputs(o, 0);
  const auto sizes = parse_sizes(o.sizes);
  return with_field(o, [&](const auto& f) {
    const auto chain = build_theorem3_chain(sizes, f);
    Json levels = Json::array();
    for (const auto& frame : chain.frames) levels.push_back(to_json(frame));
    Result r;
    r.ok = chain.ok();
    r.json = {{"field", f.name()}, {"sizes", sizes}, {"levels", std::move(levels)}, {"violations", chain.violations},
              {"ok", chain.ok()}};
    r.text = "field " + f.name() + "\nlevels " + std::to_string(chain.frames.size()) +
             "\nviolations " + std::to_string(chain.violations.size());
    return r;
  });
}

Result cartan_verify_theorem3(const Options& o) {
  require_inputs(o, 0);
  const auto sizes = parse_sizes(o.sizes);
  if (sizes.size() < 2) throw UsageError("--sizes needs at least two levels");
  const std::size_t level = o.level == 0 ? sizes.size() - 1 : o.level;
  return with_field(o, [&](const auto& f) {
    const auto chain = build_theorem3_chain(sizes, f);
    Theorem3Options opts;
    opts.exhaustive = o.exhaustive;
    opts.budget = o.budget;
    opts.samples = o.trials;
    opts.seed = o.seed;
    opts.workers = o.workers;
    const auto report = verify_theorem3(chain, level, opts);
    Result r;
    r.ok = report.zero_violations() && chain.ok();
    r.json = {{"field", f.name()}, {"sizes", sizes}};
    const Json body = to_json(report);
    for (const auto& [k, v] : body.items()) r.json[k] = v;
    r.json["chain_violations"] = chain.violations;
    return r;
  });
}

Result cartan_lemma2(const Options& o) {
  require_inputs(o, 0);
  const auto [n, m] = two_sizes(o);
  return with_field(o, [&, n = n, m = m](const auto& f) {
    const auto w = lemma2_witness(n, m, f);
    Result r;
    r.ok = w.ok();
    r.json = {{"field", f.name()},
              {"n", n},
              {"m", m},
              {"x", to_json(w.x)},
              {"invertible", w.invertible},
              {"outside_span", w.outside_span},
              {"action", to_string(w.action.kind)},
              {"permutation", w.action.permutation},
              {"ok", w.ok()}};
    return r;
  });
}

Result cartan_theorem4(const Options& o) {
  require_inputs(o, 0);
  const auto primes = parse_list(o.primes, "--primes");
  return with_field(o, [&](const auto& f) {
    const auto rep = theorem4_check(primes, f, o.depth);
    Result r;
    r.ok = rep.ok();
    r.json = {{"field", f.name()},
              {"primes", rep.primes},
              {"dimension", rep.dimension},
              {"atoms_matched", rep.atoms_matched},
              {"elements_checked", rep.idempotents.elements_checked},
              {"pairs_checked", rep.idempotents.pairs_checked},
              {"st_space", rep.st_space.to_string()},
              {"st_algebra", rep.st_algebra.to_string()},
              {"violations", rep.violations},
              {"idempotent_violations", rep.idempotents.violations},
              {"ok", rep.ok()}};
    return r;
  });
}

// ---- output

std::string scalar_text(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_array()) {
    bool flat = true;
    for (const auto& e : v) flat = flat && !e.is_structured();
    if (flat) {
      std::string out;
      for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + scalar_text(v[i]);
      return out.empty() ? "-" : out;
    }
  }
  return v.dump();
}

void render_text(const Json& j, std::string& out, const std::string& indent) {
  std::size_t width = 0;
  for (const auto& [k, v] : j.items()) width = std::max(width, k.size());
  for (const auto& [k, v] : j.items()) {
    if (v.is_object()) {
      out += indent + k + "\n";
      render_text(v, out, indent + "  ");
      continue;
    }
    out += indent + k + std::string(width - k.size() + 2, ' ') + scalar_text(v) + "\n";
  }
}

using Handler = std::function<Result(const Options&)>;

struct Command {
  const char* group;
  const char* name;
  const char* help;
  Handler handler;
};

std::vector<Command> commands() {
  return {
      {"steinitz", "mul", "product of two Steinitz numbers", [](const Options& o) { return steinitz_binary(o, "mul"); }},
      {"steinitz", "lcm", "least common multiple", [](const Options& o) { return steinitz_binary(o, "lcm"); }},
      {"steinitz", "divides", "whether A divides B", [](const Options& o) { return steinitz_binary(o, "divides"); }},
      {"steinitz", "parse", "canonical form and factors", steinitz_parse},
      {"space", "rank", "rank of a bit-string element", space_rank},
      {"space", "distance", "normalized Hamming distance", space_distance},
      {"space", "axioms", "check the rank axioms on H_n", space_axioms},
      {"space", "cover", "orthogonal cover of the given elements", space_cover},
      {"tensor", "element", "a (x) b under row-major indexing", tensor_element_cmd},
      {"tensor", "iso-check", "H_n (x) H_m ~ H_nm, exhaustively", tensor_iso_check},
      {"tensor", "cover-rank", "rank of x in H_n (x) H_m through covers", tensor_cover_rank},
      {"periodic", "rank", "rank of a periodic sequence", periodic_rank},
      {"periodic", "pseudorank", "Besicovitch pseudorank of pre:tail", periodic_pseudorank},
      {"periodic", "member", "whether the sequence lies in H(u)", periodic_member},
      {"chain", "validate", "check a chain file", chain_validate},
      {"chain", "factor", "complement factorization of H_n in H_s", chain_factor},
      {"chain", "decompose", "prime decomposition of a chain", chain_decompose},
      {"chain", "st", "Steinitz truncation of a chain", chain_st},
      {"chain", "iso", "compare two chains", chain_iso},
      {"cartan", "check", "validate a frame file", cartan_check},
      {"cartan", "conjugate", "matrix conjugating one frame to another", cartan_conjugate},
      {"cartan", "count", "count Cartan subalgebras of M_m(GF(q))", cartan_count},
      {"cartan", "build-chain", "general Cartan chain over --sizes", cartan_build_chain},
      {"cartan", "verify-theorem3", "normalizer trichotomy along the chain", cartan_verify_theorem3},
      {"cartan", "lemma2", "cyclic-shift normalizer witness for --sizes n,m", cartan_lemma2},
      {"cartan", "theorem4", "idempotents of tensored diagonals for --primes", cartan_theorem4},
  };
}

void emit(const Options& o, const std::string& text, std::ostream& out) {
  if (o.out.empty()) {
    out << text;
    return;
  }
  std::ofstream file(o.out);
  if (!file) throw std::invalid_argument("cannot write " + o.out);
  file << text;
}

int fail(const Options& o, std::ostream& out, std::ostream& err, const std::string& kind, const std::string& msg) {
  err << "hamlat: " << msg << "\n";
  if (o.json) out << Json{{"ok", false}, {"error", {{"kind", kind}, {"message", msg}}}}.dump(2) << "\n";
  return kExitUsage;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Exact Hamming spaces, Steinitz numbers and Cartan subalgebras", "hamlat"};
  app.fallthrough();
  app.require_subcommand(1, 1);
  app.add_option("--field", o.field, "gf2, gf3, gf5, ... or q");
  app.add_option("--sizes", o.sizes, "comma-separated sizes");
  app.add_option("--primes", o.primes, "comma-separated primes");
  app.add_option("--depth", o.depth, "number of levels or primes to use (0 = all)");
  app.add_option("--level", o.level, "1-based chain level (default: second to last)");
  app.add_option("--trials", o.trials, "random samples");
  app.add_option("--seed", o.seed, "seed for every randomized suite");
  app.add_option("--budget", o.budget, "largest group enumerated exhaustively");
  app.add_option("--workers", o.workers, "threads for verify-theorem3");
  app.add_option("--left", o.left, "left cover members, comma-separated bit-strings");
  app.add_option("--right", o.right, "right cover members, comma-separated bit-strings");
  app.add_option("--embedding", o.embedding, "blocks as JSON or a JSON file");
  app.add_flag("--exhaustive", o.exhaustive, "enumerate instead of sampling");
  app.add_flag("--complete", o.complete, "declare the chain complete");
  app.add_flag("--json", o.json, "machine-readable output");
  app.add_option("--out", o.out, "write output to a file");

  const auto table = commands();
  std::map<std::string, CLI::App*> groups;
  const Handler* selected = nullptr;
  for (const auto& c : table) {
    auto& g = groups[c.group];
    if (g == nullptr) {
      static const std::map<std::string, std::string> about = {
          {"steinitz", "Steinitz number arithmetic"},
          {"space", "the standard Hamming space H_n"},
          {"tensor", "tensor products of standard spaces"},
          {"periodic", "periodic sequences and H(u)"},
          {"chain", "chains of embeddings H_n1 < H_n2 < ..."},
          {"cartan", "Cartan subalgebras of matrix algebras"},
      };
      g = app.add_subcommand(c.group, about.at(c.group));
      g->require_subcommand(1, 1);
    }
    auto* leaf = g->add_subcommand(c.name, c.help);
    leaf->add_option("inputs", o.inputs, "positional arguments");
    leaf->callback([&selected, &c] { selected = &c.handler; });
  }

  o.json = std::find(args.begin(), args.end(), "--json") != args.end();
  if (!args.empty() && !args.front().starts_with("-") && !groups.contains(args.front())) {
    return fail(o, out, err, "usage", "unknown command '" + args.front() + "'");
  }
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    return fail(o, out, err, "usage", e.what());
  }
  if (selected == nullptr) return fail(o, out, err, "usage", "no command given");

  try {
    Result r = (*selected)(o);
    Json body{{"ok", r.ok}};
    body.update(r.json);
    r.json = std::move(body);
    std::string text;
    if (o.json || !r.ok) {
      text = r.json.dump(2) + "\n";
    } else if (r.text) {
      text = *r.text + "\n";
    } else {
      render_text(r.json, text, "");
    }
    emit(o, text, out);
    return r.ok ? kExitOk : kExitVerificationFailed;
  } catch (const ResourceLimitError& e) {
    return fail(o, out, err, "resource_limit", e.what());
  } catch (const UsageError& e) {
    return fail(o, out, err, "usage", e.what());
  } catch (const std::invalid_argument& e) {
    return fail(o, out, err, "input", e.what());
  } catch (const std::domain_error& e) {
    return fail(o, out, err, "input", e.what());
  } catch (const std::out_of_range& e) {
    return fail(o, out, err, "input", e.what());
  } catch (const nlohmann::json::exception& e) {
    return fail(o, out, err, "input", e.what());
  }
}

}  // namespace hamlat::cli
