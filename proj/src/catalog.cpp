#include "lorentz_ops/catalog.hpp"

namespace lorentz_ops {

const CatalogEntry* find_entry(const std::string& id) {
  for (const auto& e : catalog()) {
    if (e.id == id) return &e;
  }
  return nullptr;
}

InstanceConfig load_entry(const CatalogEntry& e) { return parse_config(e.yaml); }

}  // namespace lorentz_ops
