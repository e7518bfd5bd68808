#include "restart/cli/digest.hpp"

#include <openssl/sha.h>

#include <cstdio>

#include "restart/cli/kv_config.hpp"

namespace restart::cli {

std::string sha256_hex(const std::string& data) {
  unsigned char md[SHA256_DIGEST_LENGTH];
  SHA256(reinterpret_cast<const unsigned char*>(data.data()), data.size(), md);
  std::string hex;
  hex.reserve(2 * SHA256_DIGEST_LENGTH);
  char buf[3];
  for (unsigned char b : md) {
    std::snprintf(buf, sizeof buf, "%02x", b);
    hex += buf;
  }
  return hex;
}

std::string config_digest(const train::ExperimentConfig& cfg) { return sha256_hex(serialize_config(cfg)); }

}  // namespace restart::cli
