#include "cdqaoa/instance_io.hpp"

#include <stdexcept>

namespace cdqaoa {

std::string to_string(Boundary b) { return b == Boundary::Periodic ? "periodic" : "open"; }

Boundary boundary_from_string(const std::string& s) {
  if (s == "periodic") return Boundary::Periodic;
  if (s == "open") return Boundary::Open;
  throw std::invalid_argument("unknown boundary '" + s + "'");
}

nlohmann::json to_json(const ChainSpec& spec) {
  nlohmann::json j;
  j["n"] = spec.n_sites();
  j["boundary"] = to_string(spec.boundary());
  j["couplings"] = spec.couplings();
  if (spec.seed()) j["seed"] = *spec.seed();
  return j;
}

ChainSpec chain_from_json(const nlohmann::json& j) {
  std::optional<std::uint64_t> seed;
  if (j.contains("seed") && !j.at("seed").is_null()) seed = j.at("seed").get<std::uint64_t>();
  return ChainSpec(j.at("n").get<int>(), boundary_from_string(j.at("boundary").get<std::string>()),
                   j.at("couplings").get<std::vector<double>>(), seed);
}

}  // namespace cdqaoa
