#pragma once

// String ids for the built-in systems, chains, observables and tile rules.

#include <string>
#include <vector>

#include "ergolab/markov.hpp"
#include "ergolab/systems.hpp"
#include "ergolab/tiling.hpp"

namespace ergolab {

struct CatalogEntry {
  std::string id;
  std::string description;
};

struct Truncation {
  std::size_t gauss_cap = 50;       // used by the bare id "gauss"
  std::size_t finfty_budget = 40;  // explicit generators of the countable chain
};

std::vector<CatalogEntry> catalog_systems();
std::vector<CatalogEntry> catalog_chains();
std::vector<CatalogEntry> catalog_observables();

// All of these throw ConfigError on unknown ids.
SystemPtr make_system(const std::string& id, const Truncation& truncation = {});
MarkovChain make_chain(const std::string& id, const Truncation& truncation = {});
// Observable spec resolved against the system (alphabet size, point type).
Observable make_observable(const std::string& spec, const System& system);
TileAssignment make_assignment(const std::string& spec, const System& system);

// Transition rows of the non-uniform rank-2 boundary chain in the catalog.
MarkovChain skewed_boundary_chain();
// Rotation angles sqrt(2) - 1 and sqrt(3) - 1.
std::shared_ptr<const CircleRotationAction> default_rotation_action();

}  // namespace ergolab
