#pragma once

// Golden CLI invocations shared by the unit and acceptance suites.

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "hamlat/cli.hpp"

namespace hamlat::testing {

inline const std::string kGolden = HAMLAT_GOLDEN_DIR;
inline const std::string kInputs = kGolden + "/inputs";

struct Case {
  std::string name;
  std::vector<std::string> args;
  int exit_code;
};

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

inline std::string replace_all(std::string s, const std::string& from, const std::string& to) {
  for (auto pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + to.size())) s.replace(pos, from.size(), to);
  return s;
}

inline Outcome invoke(std::vector<std::string> args) {
  for (auto& a : args) a = replace_all(a, "@IN@", kInputs);
  std::ostringstream out, err;
  const int code = hamlat::cli::run(args, out, err);
  return {code, replace_all(out.str(), kInputs, "@IN@"), replace_all(err.str(), kInputs, "@IN@")};
}

inline std::string read_text(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline const std::vector<Case>& cases() {
  static const std::vector<Case> all{
      {"steinitz_mul", {"steinitz", "mul", "2^3*3", "3^inf"}, 0},
      {"steinitz_lcm", {"steinitz", "lcm", "2^2*3", "2*5"}, 0},
      {"steinitz_divides", {"steinitz", "divides", "2*3", "2^inf*3^2"}, 0},
      {"steinitz_parse", {"steinitz", "parse", "5*2^3*3^inf"}, 0},
      {"space_rank", {"space", "rank", "1010"}, 0},
      {"space_distance", {"space", "distance", "110", "011"}, 0},
      {"space_axioms", {"space", "axioms", "4"}, 0},
      {"space_cover", {"space", "cover", "1100", "1010"}, 0},
      {"tensor_element", {"tensor", "element", "10", "110"}, 0},
      {"tensor_iso_check", {"tensor", "iso-check", "--sizes", "2,3"}, 0},
      {"tensor_cover_rank", {"tensor", "cover-rank", "110000", "--sizes", "2,3"}, 0},
      {"periodic_rank", {"periodic", "rank", "110110"}, 0},
      {"periodic_pseudorank", {"periodic", "pseudorank", "01:101"}, 0},
      {"periodic_member", {"periodic", "member", "100000", "2^inf*3"}, 0},
      {"chain_validate", {"chain", "validate", "@IN@/chain_2_6_12.json"}, 0},
      {"chain_factor", {"chain", "factor", "--sizes", "2,6", "--embedding", "[[0,1,2],[3,4,5]]"}, 0},
      {"chain_decompose", {"chain", "decompose", "--sizes", "2,6,12,60"}, 0},
      {"chain_st", {"chain", "st", "--sizes", "2,4,8"}, 0},
      {"chain_iso", {"chain", "iso", "2,4", "4"}, 0},
      {"cartan_check", {"cartan", "check", "@IN@/diag2_q.json"}, 0},
      {"cartan_conjugate", {"cartan", "conjugate", "@IN@/diag2_q.json", "@IN@/unipotent2_q.json"}, 0},
      {"cartan_count", {"cartan", "count", "2", "--field", "gf3"}, 0},
      {"cartan_build_chain", {"cartan", "build-chain", "--field", "gf2", "--sizes", "2,4"}, 0},
      {"cartan_verify_theorem3", {"cartan", "verify-theorem3", "--field", "gf2", "--sizes", "2,4", "--exhaustive"}, 0},
      {"cartan_lemma2", {"cartan", "lemma2", "--field", "q", "--sizes", "3,2"}, 0},
      {"cartan_theorem4", {"cartan", "theorem4", "--field", "q", "--primes", "2,3"}, 0},
      // One deliberate failure per exit class.
      {"fail_verification_chain", {"chain", "validate", "--sizes", "2,5"}, 1},
      {"fail_verification_frame", {"cartan", "check", "@IN@/repeated2_q.json"}, 1},
      {"fail_usage_unknown_command", {"frobnicate"}, 2},
      {"fail_usage_missing_argument", {"steinitz", "mul", "2"}, 2},
      {"fail_input_missing_file", {"chain", "validate", "@IN@/absent.json"}, 2},
      {"fail_input_malformed_file", {"chain", "validate", "@IN@/broken.json"}, 2},
      {"fail_input_bad_steinitz", {"steinitz", "parse", "4^2"}, 2},
      {"fail_resource_budget",
       {"cartan", "verify-theorem3", "--field", "gf2", "--sizes", "2,4,16", "--exhaustive", "--budget", "100"},
       2},
  };
  return all;
}

}  // namespace hamlat::testing
