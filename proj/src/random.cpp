#include "qes/random.hpp"

#include <cstdlib>
#include <string>

namespace qes {

std::uint64_t seed_from_environment() {
  const char* env = std::getenv("QES_SPECTRAL_SEED");
  if (env == nullptr || *env == '\0') return kDefaultSeed;
  try {
    std::size_t used = 0;
    const std::uint64_t seed = std::stoull(env, &used, 0);
    if (used == std::string(env).size()) return seed;
  } catch (const std::exception&) {
  }
  return kDefaultSeed;
}

}  // namespace qes
