#pragma once

#include <string>
#include <vector>

#include "lorentz_ops/config.hpp"

namespace lorentz_ops {

/// A shipped instance: the config text mirrored from configs/<id>.yaml.
struct CatalogEntry {
  std::string id;
  std::string yaml;
};

const std::vector<CatalogEntry>& catalog();
/// nullptr when unknown.
const CatalogEntry* find_entry(const std::string& id);
InstanceConfig load_entry(const CatalogEntry& e);

}  // namespace lorentz_ops
